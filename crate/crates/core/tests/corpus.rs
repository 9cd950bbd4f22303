use std::path::PathBuf;

use openbook::corpus::{corpus_files, emit_examples, trace_files};
use openbook::front::write_obk;
use openbook::parse_obk;

fn committed() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn committed_corpus_matches_generator() {
    for (name, text) in corpus_files().into_iter().chain(trace_files()) {
        let on_disk = std::fs::read_to_string(committed().join(&name))
            .unwrap_or_else(|e| panic!("{name}: {e}; regenerate with `openbook examples corpus`"));
        assert_eq!(on_disk, text, "{name} drifted from the generator");
    }
}

#[test]
fn regeneration_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = emit_examples(dir.path()).unwrap();
    for p in paths {
        let rel = p.strip_prefix(dir.path()).unwrap();
        let fresh = std::fs::read(&p).unwrap();
        let old = std::fs::read(committed().join(rel)).unwrap();
        assert_eq!(fresh, old, "{}", rel.display());
    }
}

#[test]
fn obk_files_round_trip() {
    for (name, text) in corpus_files() {
        let f = parse_obk(&text).unwrap();
        let written = write_obk(&f);
        assert_eq!(parse_obk(&written).unwrap(), f, "{name}");
        assert!(text.ends_with(&written), "{name}");
    }
}

#[test]
fn corpus_books_build() {
    for (name, text) in corpus_files() {
        let b = parse_obk(&text).unwrap().to_open_book();
        assert!(b.is_ok(), "{name}: {:?}", b.err());
    }
}
