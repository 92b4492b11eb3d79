#![no_main]

use libfuzzer_sys::fuzz_target;
use revpi::Memory;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = serde_json::from_slice::<Memory>(data) {
        let _ = m.to_string();
        let again: Memory = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(again, m);
    }
});
