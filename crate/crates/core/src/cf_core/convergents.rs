//! Convergents `p_k / q_k` of the slope.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::RealInterval;
use super::slope::SlopeSpec;

/// Partial quotients `a_1..a_K` with `p_k, q_k` for `k = -1..=K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergents {
    a: Vec<u64>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl Convergents {
    pub fn from_quotients(a: Vec<u64>) -> Self {
        let mut p = vec![BigInt::one(), BigInt::zero()];
        let mut q = vec![BigInt::zero(), BigInt::one()];
        for (i, &ak) in a.iter().enumerate() {
            let ak = BigInt::from(ak);
            p.push(&ak * &p[i + 1] + &p[i]);
            q.push(&ak * &q[i + 1] + &q[i]);
        }
        Convergents { a, p, q }
    }

    pub fn depth(&self) -> usize {
        self.a.len()
    }

    /// `a_k` for `1 <= k <= depth`.
    pub fn a(&self, k: usize) -> u64 {
        self.a[k - 1]
    }

    pub fn quotients(&self) -> &[u64] {
        &self.a
    }

    /// `p_k` for `-1 <= k <= depth`.
    pub fn p(&self, k: i64) -> &BigInt {
        &self.p[(k + 1) as usize]
    }

    pub fn q(&self, k: i64) -> &BigInt {
        &self.q[(k + 1) as usize]
    }

    /// `p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}` for every stored `k >= 0`.
    pub fn verify_determinant(&self) -> bool {
        (0..=self.depth() as i64).all(|k| {
            let det = self.p(k) * self.q(k - 1) - self.p(k - 1) * self.q(k);
            let want = if k % 2 == 0 { -BigInt::one() } else { BigInt::one() };
            det == want
        })
    }
}

pub fn convergents(slope: &SlopeSpec, depth: usize) -> Convergents {
    Convergents::from_quotients(slope.partial_quotients(depth))
}

/// Enclosure of the slope of width at most `2^-bits`, from consecutive convergents.
pub fn theta_interval(slope: &SlopeSpec, bits: u32) -> RealInterval {
    let mut depth = 8;
    loop {
        let c = convergents(slope, depth);
        let k = depth as i64;
        let prod = c.q(k) * c.q(k - 1);
        if prod.bits() > bits as u64 + 2 {
            let x = BigRational::new(c.p(k).clone(), c.q(k).clone());
            let y = BigRational::new(c.p(k - 1).clone(), c.q(k - 1).clone());
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            return RealInterval::from_rational_bounds(&lo, &hi, bits + 2);
        }
        depth *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_convergents() {
        let s = SlopeSpec::periodic(vec![], vec![1]).unwrap();
        let c = convergents(&s, 10);
        let q: Vec<i64> = (-1..=10).map(|k| i64::try_from(c.q(k).clone()).unwrap()).collect();
        assert_eq!(q, vec![0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
        assert_eq!(c.p(10), &BigInt::from(55));
        assert!(c.verify_determinant());
    }

    #[test]
    fn theta_enclosure_width() {
        let s = SlopeSpec::surd(-3, 13, 2).unwrap();
        let iv = theta_interval(&s, 200);
        assert!(iv.precision_bits() >= 199.0);
        assert!(iv.overlaps(&s.value().enclosure(300)));
    }
}
