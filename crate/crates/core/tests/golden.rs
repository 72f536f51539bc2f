//! Whole-proof figures compared byte for byte with stored SVGs.
//! Run with `UPDATE_GOLDEN=1` to rewrite the stored files.

use std::path::PathBuf;

use pascal_chase::render::{figure_svg, svg_labels, Figure, RenderOptions, FIGURES};

/// Label strings each figure must show.
fn expected_labels(name: &str) -> &'static [&'static str] {
    match name {
        "fig3" => &["64", "32", "16", "8", "4", "2", "1"],
        "fig5" => &["1"],
        "fig7" => &["1", "3", "5", "7", "9", "11", "2", "4", "6"],
        "fig9" => &["1", "2", "3", "4", "6"],
        "fig12" => &[
            "1", "-4", "10", "-20", "35", "-56", "-3", "6", "-10", "15", "-21", "-2", "3", "-4", "5", "-6", "-1",
        ],
        "fig16" => &["16", "8", "4", "2"],
        "fig18_left" => &["1", "-1", "-2", "3", "-4", "6", "-3"],
        "fig18_right" => &["70", "-35", "15", "-5", "1", "35", "-20", "10", "-4", "-10", "6", "5"],
        _ => &[],
    }
}

fn golden_path(f: &Figure) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{}.svg", f.name))
}

#[test]
fn figures_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for f in &FIGURES {
        let svg = figure_svg(f, &RenderOptions::default()).unwrap();
        assert_eq!(
            svg,
            figure_svg(f, &RenderOptions::default()).unwrap(),
            "{} is not deterministic",
            f.name
        );
        let labels = svg_labels(&svg);
        for want in expected_labels(f.name) {
            assert!(
                labels.iter().any(|l| l == want),
                "{} lacks label {want}: {labels:?}",
                f.name
            );
        }
        let path = golden_path(f);
        if update {
            std::fs::write(&path, &svg).unwrap();
            continue;
        }
        let stored = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}; run with UPDATE_GOLDEN=1 to create it", path.display()));
        assert!(stored == svg, "{} differs from {}", f.name, path.display());
    }
}
