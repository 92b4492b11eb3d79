#![no_main]

use libfuzzer_sys::fuzz_target;
use revpi::Label;

fuzz_target!(|data: &[u8]| {
    if let Ok(l) = serde_json::from_slice::<Label>(data) {
        let _ = l.to_string();
        let again: Label = serde_json::from_str(&serde_json::to_string(&l).unwrap()).unwrap();
        assert_eq!(again, l);
    }
});
