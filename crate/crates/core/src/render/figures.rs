//! The whole-proof pictures of the catalogue, rebuilt from generated scripts.

use super::{overlay, render_config_svg, OverlayMode, RenderError, RenderOptions, Shade};
use crate::chase::{replay, RuleStep, WeightedConfig};
use crate::lang::Bindings;
use crate::scripts::generate_script;

/// Which states of the replay a figure merges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Window {
    All,
    /// Up to and including the state after the last lift from row `n`.
    ThroughRow(u32),
    /// Up to the state before the first lift from row `n`.
    BeforeRow(u32),
    /// From the state after the last swap onwards.
    AfterLastSwap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Figure {
    pub name: &'static str,
    pub theorem_id: &'static str,
    pub params: &'static [(&'static str, i64)],
    window: Window,
    mode: OverlayMode,
}

macro_rules! fig {
    ($name:literal, $id:literal, [$(($p:literal, $v:expr)),*], $window:expr, $mode:ident) => {
        Figure {
            name: $name,
            theorem_id: $id,
            params: &[$(($p, $v)),*],
            window: $window,
            mode: OverlayMode::$mode,
        }
    };
}

pub static FIGURES: [Figure; 8] = [
    fig!("fig3", "row_sum", [("n", 6)], Window::All, Last),
    fig!("fig5", "hockey_stick", [("m", 2), ("n", 5)], Window::All, Last),
    fig!("fig7", "weighted_row", [("n", 6)], Window::ThroughRow(6), Last),
    fig!("fig9", "lagrange", [("n", 4)], Window::All, Last),
    fig!("fig12", "alt_binom", [("m", 3), ("n", 8)], Window::BeforeRow(5), Last),
    // Drawn from the upward chase's point of view: each cell shows the
    // weight it holds once its row is complete.
    fig!("fig16", "boscarol", [("m", 3), ("n", 7)], Window::AfterLastSwap, First),
    fig!("fig18_left", "hor", [("n", 4)], Window::All, Last),
    fig!("fig18_right", "hor_row_form", [("n", 4)], Window::All, Last),
];

impl Figure {
    pub fn by_name(name: &str) -> Result<&'static Figure, RenderError> {
        FIGURES
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| RenderError::UnknownFigure(name.to_string()))
    }

    pub fn bindings(&self) -> Bindings {
        self.params.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }
}

fn lifts_from(step: &RuleStep, row: u32) -> bool {
    matches!(step, RuleStep::Lift { n, .. } if *n == row)
}

/// The merged configuration a figure shows, plus the first and last states of
/// its window (drawn light and dark).
pub fn figure_config(f: &Figure) -> Result<(WeightedConfig, WeightedConfig, WeightedConfig), RenderError> {
    let script = generate_script(f.theorem_id, &f.bindings()).map_err(|e| RenderError::Script(e.to_string()))?;
    let states = replay(&script).map_err(|(i, e)| RenderError::InvalidScript(format!("step {i}: {e}")))?;
    let steps = &script.steps;
    let (lo, hi) = match f.window {
        Window::All => (0, states.len()),
        Window::ThroughRow(r) => {
            let last = steps.iter().rposition(|s| lifts_from(s, r)).map_or(0, |i| i + 1);
            (0, last + 1)
        }
        Window::BeforeRow(r) => (
            0,
            steps.iter().position(|s| lifts_from(s, r)).unwrap_or(steps.len()) + 1,
        ),
        Window::AfterLastSwap => (
            steps
                .iter()
                .rposition(|s| matches!(s, RuleStep::SwapSym { .. }))
                .map_or(0, |i| i + 1),
            states.len(),
        ),
    };
    let window = &states[lo..hi];
    Ok((
        overlay(window, f.mode),
        window[0].clone(),
        window[window.len() - 1].clone(),
    ))
}

/// The figure as SVG: first state shaded light, last state dark.
pub fn figure_svg(f: &Figure, o: &RenderOptions) -> Result<String, RenderError> {
    let (merged, first, last) = figure_config(f)?;
    let mut o = o.clone();
    o.weighted_shade = Shade::None;
    for (at, _) in first.cells() {
        o.highlight.insert(*at, Shade::Light);
    }
    for (at, _) in last.cells() {
        o.highlight.insert(*at, Shade::Dark);
    }
    render_config_svg(&merged, &o)
}
