#![no_main]

use goi_core::bridge::Multirel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = serde_json::from_slice::<Multirel>(data) {
        let support = m.support();
        assert_eq!(support.dom().len(), m.dom().len());
        let again: Multirel = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(again, m);
    }
});
