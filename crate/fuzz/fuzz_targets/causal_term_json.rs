#![no_main]

use libfuzzer_sys::fuzz_target;
use revpi::bs_oracle::{bs_steps, lambda, CausalTerm};
use revpi::Key;

fuzz_target!(|data: &[u8]| {
    if let Ok(a) = serde_json::from_slice::<CausalTerm>(data) {
        let _ = lambda(&a);
        for s in bs_steps(&a, Key(1)).into_iter().take(16) {
            let _ = lambda(&s.target);
        }
    }
});
