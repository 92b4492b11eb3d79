//! The checked-in fuzz seeds stay valid inputs for their targets.

use std::fs;
use std::path::PathBuf;

use revpi::bs_oracle::{bs_steps, CausalTerm};
use revpi::verification::CorpusEntry;
use revpi::{parse_process, Key, Label, Memory, RProcess, SemanticsKind};
use revpi_cli::script::parse_script;
use revpi_cli::state::StateFile;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn text_seeds_parse_unless_marked_as_errors() {
    for (name, text) in seeds("parse_process") {
        assert_eq!(parse_process(&text).is_ok(), !name.starts_with("err-"), "{name}");
    }
    for (name, text) in seeds("corpus_entry") {
        CorpusEntry::parse(&name, &text).unwrap();
    }
    for (name, text) in seeds("script") {
        parse_script(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for (name, text) in seeds("state_file") {
        StateFile::load(&text, SemanticsKind::Rpi).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn json_seeds_decode() {
    for (name, text) in seeds("rprocess_json") {
        serde_json::from_str::<RProcess>(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for (name, text) in seeds("label_json") {
        serde_json::from_str::<Label>(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for (name, text) in seeds("memory_json") {
        serde_json::from_str::<Memory>(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for (name, text) in seeds("causal_term_json") {
        let a: CausalTerm = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!bs_steps(&a, Key(1)).is_empty(), "{name}");
    }
}
