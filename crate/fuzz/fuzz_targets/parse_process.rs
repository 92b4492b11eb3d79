#![no_main]

use libfuzzer_sys::fuzz_target;
use revpi::parse_process;

// Anything that parses must print back to the same tree.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_process(text) {
        let printed = p.to_string();
        assert_eq!(parse_process(&printed).as_ref(), Ok(&p), "{printed}");
    }
});
