use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbeStatus {
    /// A solution within the radius met the residual target.
    Feasible,
    /// The optimum provably exceeds the radius.
    Infeasible,
    /// Neither; the a-priori analysis places the optimum above the radius.
    Undecided,
}

/// Result of one radius probe as seen by the search.
#[derive(Debug, Clone)]
pub struct Probe<F> {
    pub status: ProbeStatus,
    /// Certified lower bound on the optimum, if the probe produced one.
    pub certified_lower: Option<F>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRecord {
    pub radius: f64,
    pub status: ProbeStatus,
    pub certified_lower: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct MuSearch<F> {
    /// Smallest radius probed feasible.
    pub mu: F,
    /// Radius below which every probe failed; `mu ≤ (1 + eps/4)·lower`.
    pub lower: F,
    /// Best certified lower bound on the optimum.
    pub certified_lower: F,
    pub trace: Vec<ProbeRecord>,
}

impl<F> MuSearch<F> {
    pub fn probes(&self) -> usize {
        self.trace.len()
    }
}

/// Geometric bisection on `[lower, upper]` for the smallest feasible radius,
/// to a factor `1 + eps/4`. `lower` must be a valid lower bound on the
/// optimum. An infeasible upper end is widened once by a factor 2; if that
/// also fails the search reports the trace as unbracketed.
pub fn mu_search<F: Real>(
    core: &mut dyn FnMut(F) -> Result<Probe<F>>,
    lower: F,
    upper: F,
    eps: F,
) -> Result<MuSearch<F>> {
    if !(lower > F::zero()) || !(upper >= lower) {
        return Err(Error::Config(format!(
            "bad radius bracket [{lower:?}, {upper:?}]"
        )));
    }
    let mut trace = Vec::new();
    let mut certified = lower;
    let mut run = |r: F, trace: &mut Vec<ProbeRecord>, certified: &mut F| -> Result<ProbeStatus> {
        let p = core(r)?;
        if let Some(c) = p.certified_lower {
            *certified = certified.max(c);
        }
        trace.push(ProbeRecord {
            radius: r.to_f64_lossy(),
            status: p.status,
            certified_lower: p.certified_lower.map(|c| c.to_f64_lossy()),
        });
        Ok(p.status)
    };
    let mut hi = upper;
    if run(hi, &mut trace, &mut certified)? != ProbeStatus::Feasible {
        hi = (upper * F::two()).max(certified * (F::one() + eps / F::of_f64(8.0)));
        if run(hi, &mut trace, &mut certified)? != ProbeStatus::Feasible {
            let text = serde_json::to_string(&trace).unwrap_or_default();
            return Err(Error::Unbracketed(text));
        }
    }
    let mut lo = lower.max(certified.min(hi));
    let factor = F::one() + eps / F::of_f64(4.0);
    while hi > lo * factor {
        let mid = (lo * hi).sqrt();
        match run(mid, &mut trace, &mut certified)? {
            ProbeStatus::Feasible => hi = mid,
            _ => lo = mid.max(certified.min(hi)),
        }
    }
    Ok(MuSearch {
        mu: hi,
        lower: lo,
        certified_lower: certified,
        trace,
    })
}

/// Probe count of a bisection from ratio `hi/lo` down to `1 + eps/4`,
/// excluding the upper-end probe.
pub fn bisection_probes(ratio: f64, eps: f64) -> usize {
    let target = (1.0 + eps / 4.0).ln();
    let r = ratio.ln();
    if r <= target {
        0
    } else {
        (r / target).log2().ceil() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn threshold(opt: f64) -> impl FnMut(f64) -> Result<Probe<f64>> {
        move |r| {
            Ok(Probe {
                status: if r >= opt {
                    ProbeStatus::Feasible
                } else {
                    ProbeStatus::Infeasible
                },
                certified_lower: None,
            })
        }
    }

    #[test]
    fn identity_bracket_converges_to_one() {
        let s = mu_search(&mut threshold(1.0), 1.0, 4.0, 0.1).unwrap();
        assert!(s.mu >= 1.0 && s.mu <= 1.025);
    }

    #[test]
    fn diagonal_probe_count() {
        // opt 1 in the bracket [0.1, 1] for kappa 10
        let eps = 0.1;
        let s = mu_search(&mut threshold(1.0), 0.1, 1.0, eps).unwrap();
        assert!(s.mu >= 1.0 && s.mu <= 1.0 * (1.0 + eps / 4.0));
        let cap = (10.0f64 * 4.0 / eps).log2().ceil() as usize;
        assert!(s.probes() <= cap, "{} > {cap}", s.probes());
        assert!(s.probes() <= 1 + bisection_probes(10.0, eps));
    }

    #[test]
    fn unbracketed_reports_trace() {
        let err = mu_search(&mut threshold(100.0), 1.0, 4.0, 0.1).unwrap_err();
        match err {
            Error::Unbracketed(trace) => assert!(trace.contains("Infeasible")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn widening_once_recovers() {
        let s = mu_search(&mut threshold(6.0), 1.0, 4.0, 0.1).unwrap();
        assert!(s.mu >= 6.0 && s.mu <= 6.0 * 1.025);
    }

    #[test]
    fn certificates_shortcut() {
        let mut core = |r: f64| {
            Ok(Probe {
                status: if r >= 3.0 {
                    ProbeStatus::Feasible
                } else {
                    ProbeStatus::Infeasible
                },
                certified_lower: (r < 3.0).then_some(2.99),
            })
        };
        let s = mu_search(&mut core, 0.01, 10.0, 0.1).unwrap();
        assert_eq!(s.certified_lower, 2.99);
        let plain = mu_search(&mut threshold(3.0), 0.01, 10.0, 0.1).unwrap();
        assert!(s.probes() <= 2 + bisection_probes(10.0 / 2.99, 0.1));
        assert!(s.probes() < plain.probes());
    }
}
