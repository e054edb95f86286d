use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::minnorm::LinearMap;
use crate::mwsolve::SaddleProblem;
use crate::scalar::{dot, l1_norm, linf_norm, Real};

fn sign_or_coin<F: Real>(v: F, rng: &mut ChaCha8Rng) -> F {
    if v > F::zero() {
        F::one()
    } else if v < F::zero() {
        -F::one()
    } else if rng.gen_bool(0.5) {
        F::one()
    } else {
        -F::one()
    }
}

/// `max_{x ∈ R·B₁} min_{y ∈ B∞} y·(Ax − b)`, value `−min_{‖x‖₁≤R} ‖Ax − b‖₁`.
/// Weights live on `△_{2·cols}` with `x = R(w₊ − w₋)`.
pub struct L1Saddle<'a, F> {
    pub a: &'a dyn LinearMap<F>,
    pub b: &'a [F],
    pub radius: F,
    pub width: F,
}

impl<'a, F: Real> L1Saddle<'a, F> {
    pub fn new(a: &'a dyn LinearMap<F>, b: &'a [F], radius: F, norm_a: F) -> Self {
        L1Saddle {
            a,
            b,
            radius,
            width: radius * norm_a + l1_norm(b),
        }
    }

    pub fn primal(&self, w: &[F]) -> Vec<F> {
        let c = self.a.cols();
        (0..c).map(|j| self.radius * (w[j] - w[c + j])).collect()
    }
}

impl<F: Real> SaddleProblem<F> for L1Saddle<'_, F> {
    fn w_dim(&self) -> usize {
        2 * self.a.cols()
    }
    fn z_dim(&self) -> usize {
        self.a.rows()
    }
    fn width(&self) -> F {
        self.width
    }
    fn payoffs(&self, y: &[F], out: &mut [F]) {
        let c = self.a.cols();
        let mut g = vec![F::zero(); c];
        self.a.apply_adjoint_into(y, &mut g);
        let yb = dot(y, self.b);
        for j in 0..c {
            out[j] = self.radius * g[j] - yb;
            out[c + j] = -self.radius * g[j] - yb;
        }
    }
    fn best_response(&self, w: &[F], y: &mut [F], rng: &mut ChaCha8Rng) {
        let x = self.primal(w);
        self.a.apply_into(&x, y);
        for (yi, bi) in y.iter_mut().zip(self.b) {
            *yi = -sign_or_coin(*yi - *bi, rng);
        }
    }
    fn z_norm(&self, y: &[F]) -> F {
        linf_norm(y)
    }
    fn z_radius(&self) -> F {
        F::one()
    }
}

/// `max_{y ∈ B₁} min_{x ∈ R·B∞} y·(Ax − b)`, value `min_{‖x‖∞≤R} ‖Ax − b‖∞`.
/// Weights live on `△_{2·rows}` with `y = w₊ − w₋`.
pub struct LinfSaddle<'a, F> {
    pub a: &'a dyn LinearMap<F>,
    pub b: &'a [F],
    pub radius: F,
    pub width: F,
}

impl<'a, F: Real> LinfSaddle<'a, F> {
    pub fn new(a: &'a dyn LinearMap<F>, b: &'a [F], radius: F, norm_a: F) -> Self {
        LinfSaddle {
            a,
            b,
            radius,
            width: radius * norm_a + linf_norm(b),
        }
    }
}

impl<F: Real> SaddleProblem<F> for LinfSaddle<'_, F> {
    fn w_dim(&self) -> usize {
        2 * self.a.rows()
    }
    fn z_dim(&self) -> usize {
        self.a.cols()
    }
    fn width(&self) -> F {
        self.width
    }
    fn payoffs(&self, x: &[F], out: &mut [F]) {
        let r = self.a.rows();
        let mut ax = vec![F::zero(); r];
        self.a.apply_into(x, &mut ax);
        for i in 0..r {
            out[i] = ax[i] - self.b[i];
            out[r + i] = self.b[i] - ax[i];
        }
    }
    fn best_response(&self, w: &[F], x: &mut [F], rng: &mut ChaCha8Rng) {
        let r = self.a.rows();
        let y: Vec<F> = (0..r).map(|i| w[i] - w[r + i]).collect();
        self.a.apply_adjoint_into(&y, x);
        for xj in x.iter_mut() {
            *xj = -self.radius * sign_or_coin(*xj, rng);
        }
    }
    fn z_norm(&self, x: &[F]) -> F {
        linf_norm(x)
    }
    fn z_radius(&self) -> F {
        self.radius
    }
}
