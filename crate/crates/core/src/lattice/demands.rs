use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{l1_norm, Scalar};

/// Integer coordinates of a lattice point, in units of `2^{-t}`.
pub type LatticePoint = Vec<i64>;

/// Sparse demand on `V_t ∩ [0,1]^k`, keyed by integer coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDemands<F> {
    level: u32,
    dim: usize,
    entries: BTreeMap<LatticePoint, F>,
}

impl<F: Scalar> LatticeDemands<F> {
    pub fn new(level: u32, dim: usize) -> Self {
        LatticeDemands {
            level,
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Builds from `(point, value)` pairs, summing repeats.
    pub fn from_entries(
        level: u32,
        dim: usize,
        entries: impl IntoIterator<Item = (LatticePoint, F)>,
    ) -> Result<Self> {
        let mut d = Self::new(level, dim);
        for (p, v) in entries {
            d.add(p, v)?;
        }
        Ok(d)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest coordinate, `2^t`.
    pub fn extent(&self) -> i64 {
        1i64 << self.level
    }

    /// Adds `value` at `point`; entries that cancel to exactly zero vanish.
    pub fn add(&mut self, point: LatticePoint, value: F) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "lattice point",
                expected: self.dim,
                got: point.len(),
            });
        }
        let hi = self.extent();
        if point.iter().any(|&c| c < 0 || c > hi) {
            return Err(Error::Config(format!(
                "lattice point {point:?} outside [0, {hi}]^{} at level {}",
                self.dim, self.level
            )));
        }
        if value.is_zero() {
            return Ok(());
        }
        match self.entries.entry(point) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += value;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(value);
            }
        }
        Ok(())
    }

    pub fn get(&self, point: &[i64]) -> F {
        self.entries.get(point).copied().unwrap_or_else(F::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &F)> {
        self.entries.iter()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l1(&self) -> F {
        let v: Vec<F> = self.entries.values().copied().collect();
        l1_norm(&v)
    }

    pub fn total(&self) -> F {
        self.entries.values().copied().sum()
    }

    /// Real coordinates `point · 2^{-t}`.
    pub fn position(&self, point: &[i64]) -> Vec<f64> {
        let scale = (self.level as f64).exp2();
        point.iter().map(|&c| c as f64 / scale).collect()
    }

    /// Whether every support point is a corner of `{0,1}^k` in real units.
    pub fn on_corners(&self) -> bool {
        let hi = self.extent();
        self.entries
            .keys()
            .all(|p| p.iter().all(|&c| c == 0 || c == hi))
    }
}

/// One level coarser: a point with `j` odd coordinates sends `2^{-j}` of
/// its demand to each of the `2^j` roundings; aligned points pass through.
pub fn reduce_level<F: Scalar>(b: &LatticeDemands<F>) -> Result<LatticeDemands<F>> {
    if b.level == 0 {
        return Err(Error::Config(
            "level 0 cannot be reduced further; route to a corner".into(),
        ));
    }
    let mut out = LatticeDemands::new(b.level - 1, b.dim);
    for (p, &v) in &b.entries {
        let odd: Vec<usize> = (0..b.dim).filter(|&i| p[i] & 1 == 1).collect();
        let share = v * F::pow2(-(odd.len() as i32));
        let base: Vec<i64> = p.iter().map(|&c| c >> 1).collect();
        for mask in 0u64..(1u64 << odd.len()) {
            let mut q = base.clone();
            for (bit, &i) in odd.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    q[i] += 1;
                }
            }
            out.add(q, share)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelSummary {
    pub t: u32,
    pub support_size: usize,
    pub l1_mass: f64,
    pub weight: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use num_traits::Zero;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn half_point_splits_evenly() {
        let b = LatticeDemands::from_entries(1, 1, [(vec![1], 1.0)]).unwrap();
        let c = reduce_level(&b).unwrap();
        assert_eq!(c.level(), 0);
        assert_eq!(c.get(&[0]), 0.5);
        assert_eq!(c.get(&[1]), 0.5);
    }

    #[test]
    fn aligned_points_pass_through() {
        let b = LatticeDemands::from_entries(3, 2, [(vec![2, 6], 1.5), (vec![4, 0], -1.5)])
            .unwrap();
        let c = reduce_level(&b).unwrap();
        assert_eq!(c.get(&[1, 3]), 1.5);
        assert_eq!(c.get(&[2, 0]), -1.5);
        assert_eq!(c.support_len(), 2);
    }

    #[test]
    fn dipole_at_half_reduces_to_half_dipole() {
        let b = LatticeDemands::from_entries(1, 1, [(vec![0], -1.0), (vec![1], 1.0)]).unwrap();
        let c = reduce_level(&b).unwrap();
        assert_eq!(c.get(&[0]), -0.5);
        assert_eq!(c.get(&[1]), 0.5);
    }

    #[test]
    fn exact_conservation_in_rationals() {
        let b = LatticeDemands::from_entries(
            3,
            3,
            [
                (vec![1, 3, 5], r(1, 3)),
                (vec![7, 2, 1], r(-2, 7)),
                (vec![8, 8, 0], r(-1, 21)),
            ],
        )
        .unwrap();
        assert!(b.total().is_zero());
        let mut cur = b;
        while cur.level() > 0 {
            cur = reduce_level(&cur).unwrap();
            assert!(cur.total().is_zero());
        }
        assert!(cur.on_corners());
    }

    #[test]
    fn level_zero_refuses() {
        let b = LatticeDemands::<f64>::new(0, 2);
        assert!(reduce_level(&b).is_err());
    }

    #[test]
    fn out_of_box_rejected() {
        let mut b = LatticeDemands::<f64>::new(2, 1);
        assert!(b.add(vec![5], 1.0).is_err());
        assert!(b.add(vec![4], 1.0).is_ok());
    }
}
