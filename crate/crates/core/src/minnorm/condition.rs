use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::minnorm::NormedOperator;
use crate::scalar::{is_zero_vec, Real};

/// Empirical bound on the non-linear condition number
/// `sup_b ‖A‖·min{‖x‖ : Ax = b} / ‖b‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionEstimate<F> {
    /// Largest ratio seen over the probed demands; a valid lower bound.
    pub kappa_tilde_lower: F,
    /// Value used for scheduling; never below `kappa_tilde_lower`.
    pub kappa_tilde_assumed: F,
    /// Demand attaining `kappa_tilde_lower`.
    pub witness: Vec<F>,
    /// Linear condition number, when known by other means.
    pub kappa_linear: Option<F>,
}

impl<F: Real> ConditionEstimate<F> {
    /// Raises the assumed value; it is clamped so it never drops below the
    /// measured lower bound.
    pub fn with_assumed(mut self, assumed: F) -> Self {
        self.kappa_tilde_assumed = assumed.max_of(self.kappa_tilde_lower);
        self
    }
}

/// Oracle for `min{‖x‖ : Ax = b}`; `Ok(None)` marks `b` outside the image.
pub type OptOracle<'a, F> = dyn Fn(&[F]) -> Result<Option<F>> + 'a;

/// Probes codomain basis vectors, images of domain basis vectors, and
/// `trials` random images `A x` (Gaussian `x`, half of them sparse).
pub fn estimate_kappa_tilde<F: Real>(
    a: &NormedOperator<F>,
    trials: usize,
    opt_oracle: &OptOracle<'_, F>,
    seed: u64,
) -> Result<ConditionEstimate<F>> {
    let norm_a = a.opnorm()?;
    let (rows, cols) = (a.codomain_dim(), a.domain_dim());
    let mut candidates: Vec<Vec<F>> = Vec::new();
    for i in 0..rows {
        let mut e = vec![F::zero(); rows];
        e[i] = F::one();
        candidates.push(e);
    }
    for j in 0..cols {
        let mut e = vec![F::zero(); cols];
        e[j] = F::one();
        candidates.push(a.apply(&e)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let x: Vec<F> = (0..cols)
            .map(|_| {
                if t % 2 == 1 && rng.gen_bool(0.7) {
                    F::zero()
                } else {
                    F::of_f64(rng.sample::<f64, _>(rand_distr::StandardNormal))
                }
            })
            .collect();
        candidates.push(a.apply(&x)?);
    }

    let mut best = F::zero();
    let mut witness = Vec::new();
    for b in candidates {
        if is_zero_vec(&b) {
            continue;
        }
        let Some(opt) = opt_oracle(&b)? else {
            continue;
        };
        let nb = a.codomain_norm_of(&b);
        if !(opt > F::zero()) {
            return Err(Error::OracleInconsistency(format!(
                "optimum {opt:?} for nonzero demand"
            )));
        }
        let ratio = norm_a * opt / nb;
        if ratio > best {
            best = ratio;
            witness = b;
        }
    }
    if witness.is_empty() {
        return Err(Error::OracleInconsistency(
            "no probed demand was in the image of the operator".into(),
        ));
    }
    Ok(ConditionEstimate {
        kappa_tilde_lower: best,
        kappa_tilde_assumed: best,
        witness,
        kappa_linear: None,
    })
}
