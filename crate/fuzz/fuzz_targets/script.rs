#![no_main]

use libfuzzer_sys::fuzz_target;
use revpi_cli::script::{parse_script, run_script};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(lines) = parse_script(text) {
        // Keep runs short: long step lists only re-exercise the engine.
        if lines.len() <= 12 {
            if let Ok((session, _)) = run_script(&lines) {
                assert!(session.replays());
            }
        }
    }
});
