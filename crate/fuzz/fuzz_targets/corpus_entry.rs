#![no_main]

use libfuzzer_sys::fuzz_target;
use revpi::verification::CorpusEntry;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = CorpusEntry::parse("fuzz", text);
    }
});
