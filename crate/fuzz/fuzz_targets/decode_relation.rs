#![no_main]

use goi_core::Rel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<Rel>(data) {
        assert!(r.pairs().iter().all(|&(a, b)| a < r.dom().len() && b < r.cod().len()));
        let again: Rel = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert!(again.same_graph(&r));
    }
});
