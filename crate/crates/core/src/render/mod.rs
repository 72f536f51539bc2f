//! SVG and TikZ drawings of configurations and proof scripts.
//!
//! Cells are pointy-top hexagons; cell `(n,k)` is centred at
//! `x = (k - n/2)·s·√3`, `y = 1.5·n·s` for cell size `s`. Output is a pure
//! function of its inputs, so equal inputs give byte-equal documents.

mod figures;
mod tikz;

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::chase::{check_script, replay, ProofScript, RuleStep, WeightedConfig};
use crate::exact::Weight;
use crate::triangle::{Coord, TriangleError};

pub use figures::{figure_config, figure_svg, Figure, FIGURES};
pub use tikz::render_tikz;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("cell size must be a positive finite number, got {0}")]
    CellSize(f64),
    #[error("script does not check: {0}")]
    InvalidScript(String),
    #[error(transparent)]
    Triangle(#[from] TriangleError),
    #[error("unknown figure `{0}`")]
    UnknownFigure(String),
    #[error("{0}")]
    Script(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Shade {
    #[default]
    None,
    Light,
    Mid,
    Dark,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadeMap {
    pub light: String,
    pub mid: String,
    pub dark: String,
}

impl Default for ShadeMap {
    fn default() -> Self {
        ShadeMap {
            light: "#e6e6e6".into(),
            mid: "#c9c9c9".into(),
            dark: "#b0b0b0".into(),
        }
    }
}

impl ShadeMap {
    pub fn fill(&self, s: Shade) -> &str {
        match s {
            Shade::None => "none",
            Shade::Light => &self.light,
            Shade::Mid => &self.mid,
            Shade::Dark => &self.dark,
        }
    }
}

/// Which way arrows point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArrowStyle {
    /// Along the weight flow: lifts point up, drops point down.
    #[default]
    WeightRule,
    /// Pascal's rule orientation, every arrow reversed.
    Pascal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelMode {
    #[default]
    Weights,
    Binomials,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    cell_size: f64,
    pub shades: ShadeMap,
    pub arrows: ArrowStyle,
    pub labels: LabelMode,
    /// Shade for weighted cells with no entry in `highlight`.
    pub weighted_shade: Shade,
    pub highlight: BTreeMap<Coord, Shade>,
    /// Draw the empty triangle down to this row even if no weight reaches it.
    pub rows: Option<u32>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            cell_size: 40.0,
            shades: ShadeMap::default(),
            arrows: ArrowStyle::default(),
            labels: LabelMode::default(),
            weighted_shade: Shade::Light,
            highlight: BTreeMap::new(),
            rows: None,
        }
    }
}

impl RenderOptions {
    pub fn with_cell_size(s: f64) -> Result<Self, RenderError> {
        let mut o = RenderOptions::default();
        o.set_cell_size(s)?;
        Ok(o)
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn set_cell_size(&mut self, s: f64) -> Result<(), RenderError> {
        if !(s.is_finite() && s > 0.0) {
            return Err(RenderError::CellSize(s));
        }
        self.cell_size = s;
        Ok(())
    }

    fn shade_of(&self, at: Coord, weighted: bool) -> Shade {
        match self.highlight.get(&at) {
            Some(s) => *s,
            None if weighted => self.weighted_shade,
            None => Shade::None,
        }
    }
}

/// Formats a coordinate with two decimals; `-0.00` is printed as `0.00`.
fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn center(at: Coord, s: f64) -> (f64, f64) {
    let x = (at.k as f64 - at.n as f64 / 2.0) * s * 3f64.sqrt();
    (x, at.n as f64 * 1.5 * s)
}

fn hexagon_points(at: Coord, s: f64) -> String {
    let (cx, cy) = center(at, s);
    let h = s * 3f64.sqrt() / 2.0;
    let pts = [
        (cx, cy - s),
        (cx + h, cy - s / 2.0),
        (cx + h, cy + s / 2.0),
        (cx, cy + s),
        (cx - h, cy + s / 2.0),
        (cx - h, cy - s / 2.0),
    ];
    pts.iter()
        .map(|(x, y)| format!("{},{}", num(*x), num(*y)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn font_size(label: &str, s: f64) -> f64 {
    let len = label.chars().count().max(1) as f64;
    (s * 0.55).min(s * 1.5 / len)
}

/// Arrow segments `(from, to, both_ends)` for a step, phantom ends dropped.
fn step_arrows(step: &RuleStep, style: ArrowStyle) -> Vec<(Coord, Coord, bool)> {
    let at = step.at();
    let mut out = match step {
        RuleStep::SwapSym { .. } => vec![(at, at.mirror(), true)],
        RuleStep::Lift { .. } | RuleStep::ShiftRight { .. } => {
            let (_, targets) = step.sources_and_targets();
            targets.into_iter().map(|t| (at, t, false)).collect()
        }
        RuleStep::Drop { .. } => {
            let (sources, targets) = step.sources_and_targets();
            sources.into_iter().map(|s| (s, targets[0], false)).collect()
        }
    };
    out.retain(|(a, b, _)| !a.is_phantom() && !b.is_phantom() && a != b);
    if style == ArrowStyle::Pascal {
        for seg in &mut out {
            *seg = (seg.1, seg.0, seg.2);
        }
    }
    out
}

fn render_svg(c: &WeightedConfig, o: &RenderOptions, arrows: &[(Coord, Coord, bool)]) -> Result<String, RenderError> {
    let s = o.cell_size;
    let max_row = c
        .max_row()
        .into_iter()
        .chain(o.rows)
        .chain(o.highlight.keys().map(|at| at.n))
        .chain(arrows.iter().flat_map(|(a, b, _)| [a.n, b.n]))
        .max();

    let half_w = max_row.map_or(0.0, |r| r as f64 / 2.0 * s * 3f64.sqrt()) + s * 3f64.sqrt() / 2.0;
    let margin = s / 4.0;
    let (x0, y0) = (-half_w - margin, -s - margin);
    let width = 2.0 * (half_w + margin);
    let height = max_row.map_or(0.0, |r| r as f64 * 1.5 * s) + 2.0 * (s + margin);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        num(width),
        num(height),
        num(x0),
        num(y0),
        num(width),
        num(height)
    )
    .expect("string write");
    out.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" ",
        "markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333333\"/>",
        "</marker></defs>\n",
        "<style>.bg{stroke:#999999;stroke-width:1}.cell{stroke:#333333;stroke-width:1.2}",
        ".label,.binom{font-family:sans-serif;text-anchor:middle;dominant-baseline:central}",
        ".binom{fill:#666666}.arrow{stroke:#333333;stroke-width:1.5;fill:none}",
        ".swap{stroke-dasharray:4 3}</style>\n"
    ));

    if let Some(r) = max_row {
        for n in 0..=r {
            for k in 0..=n as i64 {
                let at = Coord::new(n, k);
                if c.weight(at).is_some() {
                    continue;
                }
                writeln!(
                    out,
                    "<polygon class=\"bg\" data-n=\"{n}\" data-k=\"{k}\" points=\"{}\" fill=\"{}\"/>",
                    hexagon_points(at, s),
                    o.shades.fill(o.shade_of(at, false))
                )
                .expect("string write");
            }
        }
    }

    for (at, w) in c.cells() {
        writeln!(
            out,
            "<polygon class=\"cell\" data-n=\"{}\" data-k=\"{}\" points=\"{}\" fill=\"{}\"/>",
            at.n,
            at.k,
            hexagon_points(*at, s),
            o.shades.fill(o.shade_of(*at, true))
        )
        .expect("string write");
        let (cx, cy) = center(*at, s);
        let binom = || -> Result<String, RenderError> { Ok(at.binom()?.to_string()) };
        let (main, sub) = match o.labels {
            LabelMode::Weights => (w.to_string(), None),
            LabelMode::Binomials => (binom()?, None),
            LabelMode::Both => (w.to_string(), Some(binom()?)),
        };
        let main_y = if sub.is_some() { cy - s * 0.22 } else { cy };
        writeln!(
            out,
            "<text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"{}\">{}</text>",
            num(cx),
            num(main_y),
            num(font_size(&main, s)),
            escape(&main)
        )
        .expect("string write");
        if let Some(sub) = sub {
            writeln!(
                out,
                "<text class=\"binom\" x=\"{}\" y=\"{}\" font-size=\"{}\">{}</text>",
                num(cx),
                num(cy + s * 0.32),
                num(font_size(&sub, s) * 0.7),
                escape(&sub)
            )
            .expect("string write");
        }
    }

    for (from, to, both) in arrows {
        let (x1, y1) = center(*from, s);
        let (x2, y2) = center(*to, s);
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = (dx * dx + dy * dy).sqrt();
        let trim = (s * 0.45).min(len / 3.0);
        let (ux, uy) = (dx / len * trim, dy / len * trim);
        let (class, start) = if *both {
            ("arrow swap", " marker-start=\"url(#arrow)\"")
        } else {
            ("arrow", "")
        };
        writeln!(
            out,
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"{start} marker-end=\"url(#arrow)\"/>",
            num(x1 + ux),
            num(y1 + uy),
            num(x2 - ux),
            num(y2 - uy)
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// A standalone SVG document for one configuration. Fails only when
/// binomial labels are requested beyond the triangle's row cap.
pub fn render_config_svg(c: &WeightedConfig, o: &RenderOptions) -> Result<String, RenderError> {
    render_svg(c, o, &[])
}

/// One panel per state: panel `i` is the configuration before step `i`, with
/// that step's arrows drawn and its targets shaded dark. The extra last panel
/// is the final configuration. The script must check; nothing is rendered
/// otherwise.
pub fn render_script_svg(s: &ProofScript, o: &RenderOptions) -> Result<Vec<String>, RenderError> {
    let report = check_script(s);
    if !report.valid {
        return Err(RenderError::InvalidScript(report.to_string()));
    }
    let states = replay(s).map_err(|(i, e)| RenderError::InvalidScript(format!("step {i}: {e}")))?;
    let rows = states.iter().filter_map(|c| c.max_row()).chain(o.rows).max();
    let mut panels = Vec::with_capacity(states.len());
    for (i, state) in states.iter().enumerate() {
        let mut opts = o.clone();
        opts.rows = rows;
        let arrows = match s.steps.get(i) {
            Some(step) => {
                let (sources, targets) = step.sources_and_targets();
                for at in sources.into_iter().filter(|c| !c.is_phantom()) {
                    opts.highlight.entry(at).or_insert(Shade::Mid);
                }
                for at in targets.into_iter().filter(|c| !c.is_phantom()) {
                    opts.highlight.insert(at, Shade::Dark);
                }
                step_arrows(step, o.arrows)
            }
            None => Vec::new(),
        };
        panels.push(render_svg(state, &opts, &arrows)?);
    }
    Ok(panels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlayMode {
    /// Each cell shows the first nonzero weight it takes.
    First,
    /// Each cell shows the last nonzero weight it held.
    Last,
}

/// Merges a sequence of configurations into one picture of everything the
/// chase wrote, the way the figures show a whole proof at once.
pub fn overlay(states: &[WeightedConfig], mode: OverlayMode) -> WeightedConfig {
    let mut seen: BTreeMap<Coord, Weight> = BTreeMap::new();
    for state in states {
        for (at, w) in state.cells() {
            match mode {
                OverlayMode::First => {
                    seen.entry(*at).or_insert_with(|| w.clone());
                }
                OverlayMode::Last => {
                    seen.insert(*at, w.clone());
                }
            }
        }
    }
    WeightedConfig::from_cells(seen)
}

/// Text content of every label element, in document order.
pub fn svg_labels(svg: &str) -> Vec<String> {
    svg.lines()
        .filter(|l| l.starts_with("<text class=\"label\""))
        .filter_map(|l| {
            let start = l.find('>')? + 1;
            let end = l.rfind("</text>")?;
            Some(
                l[start..end]
                    .replace("&lt;", "<")
                    .replace("&gt;", ">")
                    .replace("&amp;", "&"),
            )
        })
        .collect()
}
