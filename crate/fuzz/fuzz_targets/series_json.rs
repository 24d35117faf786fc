#![no_main]

use jacobi_forms::series::FourierSeries;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(s) = FourierSeries::from_json(src) {
        let j = s.to_json();
        let back = FourierSeries::from_json(&j).expect("encoded series decodes");
        assert_eq!(back.to_json(), j);
    }
});
