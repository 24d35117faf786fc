#![no_main]

use jacobi_forms::formlang::parse_form;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    match parse_form(src) {
        Ok(e) => {
            let printed = e.to_string();
            let again = parse_form(&printed).expect("printed form reparses");
            assert_eq!(e, again);
            assert_eq!(printed, again.to_string());
        }
        Err(jacobi_forms::Error::Parse { offset, .. }) => assert!(offset <= src.len()),
        Err(e) => panic!("unexpected error kind {e:?}"),
    }
});
