//! The shipped example diagrams, generated from code so the committed files can be
//! checked for drift.

use std::path::{Path, PathBuf};

use crate::classify::shark_slide_certificate;
use crate::front::{parse_obk, write_obk, ObkFile, StabSign};
use crate::words::{MoveSet, MoveTrace, PresMove, Side};

/// The `Σ_k` front: two unknots whose upper strands cross `2k` times.
pub fn sigma_front_text(k: usize) -> String {
    let crossings = vec!["x0"; 2 * k].join(" ");
    format!("knot K1:\nl0\nknot K2:\nl1 {crossings} r1 r0\n")
}

fn canonical(text: &str) -> ObkFile {
    parse_obk(text).expect("corpus sources parse")
}

fn stabilized_unknot(sign: StabSign) -> ObkFile {
    let base = canonical("knot S:\nl0 r0\n");
    ObkFile {
        front: base.front.stabilize(0, sign).expect("component 0 exists"),
        twists: Vec::new(),
    }
}

/// `(file name, contents)` for every corpus file, in a fixed order.
pub fn corpus_files() -> Vec<(String, String)> {
    let mut out: Vec<(String, String, ObkFile)> = vec![
        ("unknot.obk".into(), "standard Legendrian unknot, tb -1, rot 0".into(), canonical("knot U:\nl0 r0\n")),
        (
            "unknot_rot0.obk".into(),
            "subcritical page with one rot 0 unknot: (S2xS3, xi_0)".into(),
            canonical("knot U:\nl0 r0\n"),
        ),
        ("shark_pos.obk".into(), "shark: positively stabilized unknot, tb -2, rot 1".into(), stabilized_unknot(StabSign::Plus)),
        ("shark_neg.obk".into(), "shark: negatively stabilized unknot, tb -2, rot -1".into(), stabilized_unknot(StabSign::Minus)),
    ];
    for k in [1usize, 2, 3, 5] {
        let f = canonical(&format!("{}twists: K2 K1 K2 K1\n", sigma_front_text(k)));
        out.push((
            format!("sigma{k}.obk"),
            format!("N_{k}: page Sigma_{k} (two unknots, linking {k}), monodromy (tau_K1 o tau_K2)^2"),
            f,
        ));
    }
    let shark = stabilized_unknot(StabSign::Plus);
    let two = {
        let mut text = write_obk(&shark).replace("knot S:", "knot A:");
        text.push_str(&write_obk(&shark).replace("knot S:", "knot B:"));
        canonical(&text)
    };
    out.push(("figure5.obk".into(), "two unlinked sharks, rot (1, 1)".into(), two));
    out.push((
        "fig8.obk".into(),
        "cancelling pair: a tb -1 circle running once over the 1-handle g".into(),
        canonical("handles: g\nknot C:\nl0 h0:g+ r0\n"),
    ));
    out.push((
        "dtstar_tau.obk".into(),
        "page DT*S2 with one right-handed Dehn twist".into(),
        canonical("knot L:\nl0 r0\ntwists: L\n"),
    ));
    out.push((
        "dtstar_tau2.obk".into(),
        "page DT*S2 with monodromy tau^2: S2xS3".into(),
        canonical("knot L:\nl0 r0\ntwists: L L\n"),
    ));
    out.into_iter()
        .map(|(name, comment, f)| (name, format!("# {comment}\n{}", write_obk(&f))))
        .collect()
}

fn trace_json(initial: &str, steps: Vec<PresMove>) -> String {
    let t = MoveTrace::record(initial.parse().expect("fixed presentation"), steps, MoveSet::Standard)
        .expect("fixed trace replays");
    pretty(&t)
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Presentation traces and the stable equivalence certificate, as JSON files under
/// `traces/`.
pub fn trace_files() -> Vec<(String, String)> {
    let gen = |g: &str| g.to_string();
    let (left, right, cert) = shark_slide_certificate();
    vec![
        (
            "traces/trivial_g.json".into(),
            trace_json("<g | g>", vec![PresMove::AC4remove { generator: gen("g") }]),
        ),
        (
            "traces/ab_b.json".into(),
            trace_json(
                "<a, b | a b, b>",
                vec![
                    PresMove::AC3 { target: 0, source: 1, side: Side::Right, inverse: true },
                    PresMove::AC4remove { generator: gen("a") },
                    PresMove::AC4remove { generator: gen("b") },
                ],
            ),
        ),
        ("traces/shark_left.json".into(), pretty(&left)),
        ("traces/shark_right.json".into(), pretty(&right)),
        ("traces/shark_stable.json".into(), pretty(&cert)),
    ]
}

/// Writes the corpus into `dir` and returns the written paths.
pub fn emit_examples(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, text) in corpus_files().into_iter().chain(trace_files()) {
        let p = dir.join(name);
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&p, text)?;
        paths.push(p);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_files_have_two_components() {
        let files = corpus_files();
        let (_, text) = files.iter().find(|(n, _)| n == "sigma2.obk").unwrap();
        let f = parse_obk(text).unwrap();
        assert_eq!(f.front.component_count(), 2);
        assert_eq!(f.front.linking(0, 1).unwrap(), 2);
    }

    #[test]
    fn shipped_traces_verify() {
        for (name, text) in trace_files().iter().filter(|(n, _)| !n.contains("shark")) {
            let t: MoveTrace = serde_json::from_str(text).unwrap();
            assert!(crate::words::verify_trace(&t).accepted, "{name}");
            assert!(t.final_.is_empty(), "{name}");
        }
    }

    #[test]
    fn corpus_round_trips() {
        for (name, text) in corpus_files() {
            let f = parse_obk(&text).unwrap();
            let again = parse_obk(&write_obk(&f)).unwrap();
            assert_eq!(again, f, "{name}");
        }
    }
}
