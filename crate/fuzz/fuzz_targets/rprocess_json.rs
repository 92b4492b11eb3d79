#![no_main]

use libfuzzer_sys::fuzz_target;
use revpi::syntax::{erase, key_multiset};
use revpi::RProcess;

fuzz_target!(|data: &[u8]| {
    if let Ok(x) = serde_json::from_slice::<RProcess>(data) {
        let _ = x.to_string();
        let _ = erase(&x);
        let _ = key_multiset(&x);
        let again: RProcess = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        assert_eq!(again, x);
    }
});
