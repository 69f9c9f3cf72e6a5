use crate::potential::PhysicalConstants;

use super::config::{
    ComplexValue, GridConfig, InitialBeam, OutputConfig, PotentialConfig, PropagatorKind,
    ScenarioConfig, StepConfig, DEFAULT_SAMPLE_STRIDE, SCHEMA_VERSION,
};

/// Propagation distance of the built-in scenarios.
pub const LIBRARY_Z_MAX: f64 = 30.0;

fn well(eta: f64, hermitian: bool) -> PotentialConfig {
    PotentialConfig::PtTanhGaussian {
        gamma: 1.0,
        omega: 1.0,
        eta,
        hermitian,
    }
}

fn quadratic() -> PotentialConfig {
    PotentialConfig::QuadraticLinear {
        omega: 1.0,
        gamma: 1.0,
        hermitian: false,
    }
}

fn scenario(
    name: &str,
    potential: PotentialConfig,
    q0: f64,
    p0: f64,
    im_b0: f64,
    propagators: &[PropagatorKind],
) -> ScenarioConfig {
    ScenarioConfig {
        schema_version: SCHEMA_VERSION,
        name: name.to_string(),
        potential,
        initial: InitialBeam {
            q0,
            p0,
            b0: ComplexValue { re: 0.0, im: im_b0 },
            norm0: 1.0,
            alpha0: 0.0,
        },
        constants: PhysicalConstants::default(),
        propagators: propagators.to_vec(),
        z_max: LIBRARY_Z_MAX,
        sample_stride: DEFAULT_SAMPLE_STRIDE,
        gaussian: StepConfig::default(),
        oracle: StepConfig::default(),
        grid: GridConfig::default(),
        output: OutputConfig::default(),
    }
}

/// The built-in scenarios, in a fixed order.
///
/// * `fig2a`..`fig2d`: `(q0, eta)` of (1, 5), (2, 10), (3, 15), (1, 15) with
///   `b0 = i`; the `-alt` variants start with `b0 = i/2`.
/// * `fig4-*`, `fig5-*`: `eta = 10`, `q0 = -4` and `-1`, `b0 = i` (top) and
///   `i/2` (mid), each with a `-hermitian` twin without gain and loss.
/// * `fig6-*`: `q0 = 0`, `p0 = -1` with `b0 = i/2, i, 2i`.
/// * `fig7-*`: the fig6 top/bottom and fig4 top beams in the quadratic
///   potential, checked against the closed-form solution.
pub fn scenario_library() -> Vec<ScenarioConfig> {
    use PropagatorKind::*;
    let compared = [Gaussian, Grid];
    let mut out = Vec::new();

    let fig2 = [("a", 1.0, 5.0), ("b", 2.0, 10.0), ("c", 3.0, 15.0), ("d", 1.0, 15.0)];
    for (suffix, im_b0) in [("", 1.0), ("-alt", 0.5)] {
        for (panel, q0, eta) in fig2 {
            let name = format!("fig2{panel}{suffix}");
            out.push(scenario(&name, well(eta, false), q0, 0.0, im_b0, &compared));
        }
    }

    for (fig, q0) in [("fig4", -4.0), ("fig5", -1.0)] {
        for (row, im_b0) in [("top", 1.0), ("mid", 0.5)] {
            for (suffix, hermitian) in [("", false), ("-hermitian", true)] {
                let name = format!("{fig}-{row}{suffix}");
                out.push(scenario(&name, well(10.0, hermitian), q0, 0.0, im_b0, &[Gaussian]));
            }
        }
    }

    for (row, im_b0) in [("top", 0.5), ("mid", 1.0), ("bottom", 2.0)] {
        let name = format!("fig6-{row}");
        out.push(scenario(&name, well(10.0, false), 0.0, -1.0, im_b0, &compared));
    }

    let exact = [Gaussian, Oracle];
    for (row, q0, p0, im_b0) in [("top", 0.0, -1.0, 0.5), ("mid", 0.0, -1.0, 2.0), ("bottom", -4.0, 0.0, 1.0)] {
        let name = format!("fig7-{row}");
        out.push(scenario(&name, quadratic(), q0, p0, im_b0, &exact));
    }
    out
}

/// Looks a built-in scenario up by name.
pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    scenario_library().into_iter().find(|s| s.name == name)
}
