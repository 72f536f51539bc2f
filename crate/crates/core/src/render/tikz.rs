use std::fmt::Write;

use super::{LabelMode, RenderError, RenderOptions, Shade};
use crate::chase::WeightedConfig;
use crate::triangle::Coord;

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn fill(s: Shade) -> Option<&'static str> {
    match s {
        Shade::None => None,
        Shade::Light => Some("black!10"),
        Shade::Mid => Some("black!22"),
        Shade::Dark => Some("black!30"),
    }
}

/// A `tikzpicture` drawing the same hexagons as the SVG output. Needs
/// `\usetikzlibrary{shapes.geometric}` in the preamble. One cell size unit of
/// 80 maps to one centimetre of circumradius.
pub fn render_tikz(c: &WeightedConfig, o: &RenderOptions) -> Result<String, RenderError> {
    let r = o.cell_size() / 80.0;
    let max_row = c
        .max_row()
        .into_iter()
        .chain(o.rows)
        .chain(o.highlight.keys().map(|at| at.n))
        .max();
    let pos = |n: u32, k: i64| {
        let x = (k as f64 - n as f64 / 2.0) * r * 3f64.sqrt();
        (num(x), num(-1.5 * n as f64 * r))
    };

    let mut out = String::new();
    out.push_str("% requires \\usetikzlibrary{shapes.geometric}\n");
    out.push_str("\\begin{tikzpicture}[\n");
    writeln!(
        out,
        "  hexagon/.style={{draw, regular polygon, regular polygon sides=6, shape border rotate=30, minimum size={}cm, inner sep=0pt}},",
        num(2.0 * r)
    )
    .expect("string write");
    out.push_str("  bg/.style={hexagon, draw=black!40},\n");
    out.push_str("  cell/.style={hexagon, font=\\small}]\n");

    if let Some(rows) = max_row {
        for n in 0..=rows {
            for k in 0..=n as i64 {
                let at = Coord::new(n, k);
                if c.weight(at).is_some() {
                    continue;
                }
                let (x, y) = pos(n, k);
                match fill(o.shade_of(at, false)) {
                    Some(f) => writeln!(out, "  \\node[bg, fill={f}] at ({x},{y}) {{}};"),
                    None => writeln!(out, "  \\node[bg] at ({x},{y}) {{}};"),
                }
                .expect("string write");
            }
        }
    }
    for (at, w) in c.cells() {
        let (x, y) = pos(at.n, at.k);
        let label = match o.labels {
            LabelMode::Weights => w.to_string(),
            LabelMode::Binomials => at.binom()?.to_string(),
            LabelMode::Both => format!("\\genfrac{{}}{{}}{{0pt}}{{}}{{{}}}{{{}}}", w, at.binom()?),
        };
        match fill(o.shade_of(*at, true)) {
            Some(f) => writeln!(out, "  \\node[cell, fill={f}] at ({x},{y}) {{${label}$}};"),
            None => writeln!(out, "  \\node[cell] at ({x},{y}) {{${label}$}};"),
        }
        .expect("string write");
    }
    out.push_str("\\end{tikzpicture}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Weight;
    use crate::scripts::generate_script;

    fn balanced(s: &str) -> bool {
        let mut depth = 0i64;
        for ch in s.chars() {
            match ch {
                '{' => depth += 1,
                '}' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return false;
            }
        }
        depth == 0
    }

    #[test]
    fn one_node_per_cell() {
        let c = WeightedConfig::row(3, 0, [1, -3, 3, -1]);
        let t = render_tikz(&c, &RenderOptions::default()).unwrap();
        assert!(balanced(&t));
        assert_eq!(t.matches("\\node[cell").count(), 4);
        assert_eq!(t.matches("\\node[bg").count(), 6);
        assert!(t.contains("{$-3$}"));
        assert!(t.contains("fill=black!10"));
        assert_eq!(t, render_tikz(&c, &RenderOptions::default()).unwrap());
    }

    #[test]
    fn rational_and_polynomial_labels() {
        let c = WeightedConfig::from_cells([
            (Coord::new(2, 1), Weight::ratio(1, 2)),
            (Coord::new(2, 0), "a^2*b".parse::<Weight>().unwrap()),
        ]);
        let o = RenderOptions {
            labels: LabelMode::Both,
            ..Default::default()
        };
        let t = render_tikz(&c, &o).unwrap();
        assert!(balanced(&t));
        assert!(t.contains("1/2"));
    }

    #[test]
    fn lagrange_labels() {
        let s = generate_script("lagrange", &[("n".to_string(), 4)].into()).unwrap();
        let t = render_tikz(&s.expected_final, &RenderOptions::default()).unwrap();
        for label in ["{$1$}", "{$4$}", "{$6$}"] {
            assert!(t.contains(label));
        }
        assert_eq!(t.matches("\\node[cell").count(), 5);
    }

    #[test]
    fn empty_is_a_bare_picture() {
        let t = render_tikz(&WeightedConfig::new(), &RenderOptions::default()).unwrap();
        assert!(!t.contains("\\node"));
        assert!(t.contains("\\end{tikzpicture}"));
    }
}
