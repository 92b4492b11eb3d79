#![no_main]

use libfuzzer_sys::fuzz_target;
use revpi::SemanticsKind;
use revpi_cli::state::StateFile;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = StateFile::load(text, SemanticsKind::Bs);
    }
});
