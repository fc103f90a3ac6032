#![no_main]

use goi_core::Vector;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(v) = serde_json::from_slice::<Vector>(data) {
        assert_eq!(v.coords().len(), v.space().dim());
        let again: Vector = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again.space(), v.space());
    }
});
