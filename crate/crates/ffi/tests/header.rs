//! Keeps include/platbook.h in sync with the exported symbols: every
//! pb_ function declared in the header must be exported from lib.rs with
//! #[no_mangle], and vice versa.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

fn identifiers(text: &str) -> BTreeSet<String> {
    text.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .filter(|t| t.starts_with("pb_"))
        .map(str::to_string)
        .collect()
}

#[test]
fn header_matches_exports() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = fs::read_to_string(root.join("include/platbook.h")).unwrap();
    let source = fs::read_to_string(root.join("src/lib.rs")).unwrap();

    // declarations are the pb_ identifiers followed by an opening paren
    let declared: BTreeSet<String> = identifiers(&header)
        .into_iter()
        .filter(|name| header.contains(&format!("{name}(")))
        .collect();

    let mut exported = BTreeSet::new();
    for chunk in source.split("#[no_mangle]").skip(1) {
        if let Some(pos) = chunk.find("fn ") {
            let name: String = chunk[pos + 3..]
                .chars()
                .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
                .collect();
            exported.insert(name);
        }
    }

    assert_eq!(
        declared, exported,
        "header declarations and #[no_mangle] exports differ"
    );
}

#[test]
fn error_codes_match() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = fs::read_to_string(root.join("include/platbook.h")).unwrap();
    for (name, value) in [
        ("PB_OK", platbook_ffi::PB_OK),
        ("PB_ERR_NULL", platbook_ffi::PB_ERR_NULL),
        ("PB_ERR_UTF8", platbook_ffi::PB_ERR_UTF8),
        ("PB_ERR_PARSE", platbook_ffi::PB_ERR_PARSE),
        ("PB_ERR_CERTIFICATE", platbook_ffi::PB_ERR_CERTIFICATE),
        ("PB_ERR_TOPOLOGY", platbook_ffi::PB_ERR_TOPOLOGY),
        ("PB_ERR_CAPACITY", platbook_ffi::PB_ERR_CAPACITY),
    ] {
        assert!(
            header.contains(&format!("{name} = {value}")),
            "{name} missing or mismatched in header"
        );
    }
}
