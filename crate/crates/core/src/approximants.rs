//! The five fraction families, the Farey chain linking them, matrix convergents, and the
//! identities tying them to the power series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expansion::ElementQuad;
use crate::field::Field;
use crate::ostrowski::Sturmian;
use crate::words::{sturmian_prefix, SymbolicFamily, Variant};

/// Numerator and denominator kept apart; `num/0` marks a formal anchor.
#[derive(Clone, Debug, PartialEq)]
pub struct Frac<F> {
    pub num: F,
    pub den: F,
}

impl<F: Field> Frac<F> {
    pub fn new(num: F, den: F) -> Self {
        Frac { num, den }
    }

    /// `c * x +. y`, componentwise.
    pub fn farey(c: &F, x: &Frac<F>, y: &Frac<F>) -> Frac<F> {
        Frac {
            num: c.clone() * x.num.clone() + y.num.clone(),
            den: c.clone() * x.den.clone() + y.den.clone(),
        }
    }

    /// Componentwise difference.
    pub fn minus(&self, o: &Frac<F>) -> Frac<F> {
        Frac { num: self.num.clone() - o.num.clone(), den: self.den.clone() - o.den.clone() }
    }

    pub fn is_formal(&self) -> bool {
        self.den.is_zero()
    }

    pub fn value(&self) -> Option<F> {
        self.den.inv().map(|d| self.num.clone() * d)
    }
}

impl Frac<BigRational> {
    /// Integer components as decimal strings.
    pub fn to_strings(&self) -> (String, String) {
        let s = |x: &BigRational| if x.is_integer() { x.to_integer().to_string() } else { x.to_string() };
        (s(&self.num), s(&self.den))
    }
}

/// `(1)_k, (2)_k -. (1)_k, (2)_k, (3)_k, (4)_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionCycle<F> {
    pub k: usize,
    pub f1: Frac<F>,
    pub f2m1: Frac<F>,
    pub f2: Frac<F>,
    pub f3: Frac<F>,
    pub f4: Frac<F>,
}

impl<F: Field> FractionCycle<F> {
    pub fn members(&self) -> [&Frac<F>; 5] {
        [&self.f1, &self.f2m1, &self.f2, &self.f3, &self.f4]
    }
}

pub const FAMILY_NAMES: [&str; 5] = ["(1)", "(2)-(1)", "(2)", "(3)", "(4)"];

fn int<F: Field>(n: i64) -> F {
    F::from_bigint(&BigInt::from(n))
}

/// Families computed from word values, `k = 0..=kmax`. Needs depth `kmax + 1`.
pub fn families_from_words<F: Field>(st: &Sturmian, b: u64, a: u64, kmax: usize) -> Result<Vec<FractionCycle<F>>> {
    st.require(kmax + 1)?;
    let fam = SymbolicFamily::<F>::build(st, kmax + 1, b, a)?;
    let bm1: F = int(b as i64 - 1);
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let ki = k as i64;
        let (r1, rt1) = (st.r(k + 1), st.r_tilde(k + 1));
        let (r0, rt0) = (st.r(k), st.r_tilde(k));
        let mono = |eb: &BigInt, ea: &BigInt| F::monomial(b, eb, a, ea);
        let rk1 = &fam.r(k + 1).value;
        let f1 = Frac::new(
            bm1.clone() * (rk1.clone() - fam.r(k).value.clone()),
            mono(r1, rt1) - mono(r0, rt0),
        );
        let rt = fam.r(k + 1).concat(fam.t(k), b, a);
        let f2 = Frac::new(
            bm1.clone() * rt.value,
            mono(&(r1 + st.t(k)), &(rt1 + st.t_tilde(k))) - F::one(),
        );
        let rm = fam.r(k + 1).concat(fam.m(ki), b, a);
        let f3 = Frac::new(
            bm1.clone() * (rm.value - rk1.clone()),
            mono(r1, rt1) * (mono(st.q(ki), st.p(ki)) - F::one()),
        );
        let f4 = Frac::new(
            bm1.clone() * fam.v(k + 1).value.clone(),
            mono(st.q(ki + 1), st.p(ki + 1)) - F::one(),
        );
        let f2m1 = f2.minus(&f1);
        out.push(FractionCycle { k, f1, f2m1, f2, f3, f4 });
    }
    Ok(out)
}

/// Families generated from the anchors `(3)_{-1} = (b-1)/0`, `(4)_{-1} = 0/(b-1)` by the
/// element quadruples.
pub fn farey_chain<F: Field>(quads: &[ElementQuad<F>], b: u64) -> Vec<FractionCycle<F>> {
    let bm1: F = int(b as i64 - 1);
    let mut f3 = Frac::new(bm1.clone(), F::zero());
    let mut f4 = Frac::new(F::zero(), bm1);
    let mut out = Vec::with_capacity(quads.len());
    for q in quads {
        let f1 = Frac::farey(&q.c, &f4, &f3);
        let f2m1 = Frac::farey(&q.d, &f1, &f4);
        let f2 = Frac::farey(&F::one(), &f2m1, &f1);
        let n3 = Frac::farey(&q.e, &f2, &f2m1);
        let n4 = Frac::farey(&q.f, &n3, &f2);
        f3 = n3.clone();
        f4 = n4.clone();
        out.push(FractionCycle { k: q.k, f1, f2m1, f2, f3: n3, f4: n4 });
    }
    out
}

/// Interleaved element list `c_0, d_0, 1, e_0, f_0, c_1, ...`.
pub fn raw_elements<F: Field>(quads: &[ElementQuad<F>]) -> Vec<F> {
    let mut out = Vec::with_capacity(quads.len() * 5);
    for q in quads {
        out.extend([q.c.clone(), q.d.clone(), F::one(), q.e.clone(), q.f.clone()]);
    }
    out
}

/// `P_j / Q_j` from `P_{-1} = b-1, P_0 = 0, Q_{-1} = 0, Q_0 = b-1` and
/// `X_j = alpha_j X_{j-1} + X_{j-2}`.
pub fn matrix_convergents<F: Field>(elements: &[F], b: u64) -> Vec<Frac<F>> {
    let bm1: F = int(b as i64 - 1);
    let mut prev2 = Frac::new(bm1.clone(), F::zero());
    let mut prev1 = Frac::new(F::zero(), bm1);
    let mut out = Vec::with_capacity(elements.len());
    for e in elements {
        let cur = Frac::farey(e, &prev1, &prev2);
        out.push(cur.clone());
        prev2 = prev1;
        prev1 = cur;
    }
    out
}

/// Members of a list of cycles in chain order.
pub fn flatten<F: Field>(cycles: &[FractionCycle<F>]) -> Vec<Frac<F>> {
    cycles.iter().flat_map(|c| c.members().into_iter().cloned()).collect()
}

/// `gamma_k = beta^{q_k} alpha^{p_k}` with `beta = 1/b`, `alpha = 1/a`.
pub fn gamma<F: Field>(st: &Sturmian, b: u64, a: u64, k: i64) -> F {
    F::monomial(b, st.q(k), a, st.p(k)).inv().expect("nonzero monomial")
}

/// `beta^eb alpha^ea`.
pub fn inv_monomial<F: Field>(b: u64, eb: &BigInt, a: u64, ea: &BigInt) -> F {
    F::monomial(b, eb, a, ea).inv().expect("nonzero monomial")
}

/// `sigma_k` for `k = 0..=kmax` from the three-term recursion.
pub fn sigma_recursive<F: Field>(st: &Sturmian, b: u64, a: u64, kmax: usize) -> Result<Vec<F>> {
    st.require(kmax.max(1))?;
    let one = F::one();
    let mut sigma = vec![F::zero(), inv_monomial(b, &BigInt::from(st.gap(1)), a, &BigInt::one())];
    for k in 1..kmax {
        let ki = k as i64;
        let g = |j: i64| gamma::<F>(st, b, a, j);
        let gap = BigInt::from(st.gap(k + 1));
        let gpow = inv_monomial::<F>(b, &(&gap * st.q(ki)), a, &(&gap * st.p(ki)));
        let coef = (one.clone() - g(ki + 1) - gpow.clone() * (one.clone() - g(ki - 1)))
            * (one.clone() - g(ki)).inv().expect("1 - gamma_k is nonzero");
        let next = coef * sigma[k].clone() + gpow * sigma[k - 1].clone();
        sigma.push(next);
    }
    sigma.truncate(kmax + 1);
    Ok(sigma)
}

/// `sigma_k` summed letter by letter over `V_k`: the Sturmian letters up to `q_k - 1`,
/// then a final letter fixed by the ones count `p_k`.
pub fn sigma_direct(st: &Sturmian, b: u64, a: u64, k: usize) -> Result<BigRational> {
    let qk = usize::try_from(st.q(k as i64).clone()).map_err(|_| Error::InvalidInput("q_k too large".into()))?;
    if qk <= 1 {
        return Ok(sigma_recursive::<BigRational>(st, b, a, k.max(1))?[k].clone());
    }
    let w = sturmian_prefix(st.theta(), st.rho(), qk - 1, Variant::Lower, st.max_bits())?;
    let pk = usize::try_from(st.p(k as i64).clone()).unwrap();
    let last = pk.checked_sub(w.ones()).filter(|&x| x <= 1).ok_or_else(|| {
        Error::Verification(format!("prefix of length {} has too many ones for p_{k}", qk - 1))
    })?;
    let beta = BigRational::new(BigInt::one(), BigInt::from(b));
    let alpha = BigRational::new(BigInt::one(), BigInt::from(a));
    let mut acc = BigRational::zero();
    let mut bn = BigRational::one();
    let mut an = BigRational::one();
    let letters = w.iter().chain(std::iter::once(last == 1));
    for s in letters {
        bn *= &beta;
        if s {
            an *= &alpha;
            acc += &bn * &an;
        }
    }
    Ok(acc)
}

/// `(-1)^k (b-1) beta^{r_{k+1}+q_k} alpha^{r~_{k+1}+p_k}`.
pub fn telescoped_term<F: Field>(st: &Sturmian, b: u64, a: u64, k: usize) -> F {
    let ki = k as i64;
    let v = int::<F>(b as i64 - 1)
        * inv_monomial::<F>(b, &(st.r(k + 1) + st.q(ki)), a, &(st.r_tilde(k + 1) + st.p(ki)));
    if k.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// Outcome of one identity at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub k: usize,
    pub holds: bool,
}

/// Identities linking `sigma`, `gamma` and the `(3)`/`(4)` families for `k = 0..kmax`.
pub fn check_identities<F: Field>(
    st: &Sturmian,
    b: u64,
    a: u64,
    cycles: &[FractionCycle<F>],
) -> Result<Vec<IdentityCheck>> {
    let kmax = cycles.len();
    st.require(kmax + 1)?;
    let sigma = sigma_recursive::<F>(st, b, a, kmax)?;
    let one = F::one();
    let bm1: F = int(b as i64 - 1);
    let g = |j: usize| gamma::<F>(st, b, a, j as i64);
    let mut out = Vec::new();
    for k in 0..kmax {
        // (1 - gamma_k) sigma_{k+1} - (1 - gamma_{k+1}) sigma_k
        if k + 1 < sigma.len() {
            let lhs = (one.clone() - g(k)) * sigma[k + 1].clone() - (one.clone() - g(k + 1)) * sigma[k].clone();
            out.push(IdentityCheck { name: "telescoped sigma", k, holds: lhs == telescoped_term::<F>(st, b, a, k) });
        }
        // (4)_{k-1} = (b-1) sigma_k / (1 - gamma_k)
        let prev4 = if k == 0 { Frac::new(F::zero(), bm1.clone()) } else { cycles[k - 1].f4.clone() };
        let want = bm1.clone() * sigma[k].clone() * (one.clone() - g(k)).inv().unwrap();
        out.push(IdentityCheck { name: "periodic V value", k, holds: prev4.value() == Some(want) });
        // (3)_k - (4)_{k-1} = (b-1) * telescoped / (1 - gamma_k)
        let diff = cycles[k].f3.value().unwrap() - prev4.value().unwrap();
        let want = bm1.clone() * telescoped_term::<F>(st, b, a, k) * (one.clone() - g(k)).inv().unwrap();
        out.push(IdentityCheck { name: "(3)-(4) difference", k, holds: diff == want });
    }
    Ok(out)
}

/// Exponents `(u_k, v_k)` of the approximation errors of `(4)_{k-1}` and `(3)_k`.
/// Needs depth `k + 3`.
pub fn error_exponents(st: &Sturmian, k: usize) -> Result<(BigInt, BigInt)> {
    st.require(k + 3)?;
    let ki = k as i64;
    let u = if st.gap(k + 2) >= 1 { st.r(k + 1).clone() } else { st.r(k) + st.q(ki + 1) };
    let v = match (st.gap(k + 2), st.gap(k + 3)) {
        (g, _) if g >= 2 => st.r(k + 1) + st.q(ki),
        (1, h) if h >= 1 => st.r(k + 1) + st.q(ki) * 2,
        (1, _) => st.r(k + 1) + st.q(ki),
        _ => st.r(k).clone(),
    };
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf_core::SlopeSpec;
    use crate::expansion::element_quads;
    use crate::field::Residues;
    use crate::ostrowski::InterceptSpec;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn setup(period: u64, digits: Vec<u64>) -> Sturmian {
        let s = SlopeSpec::periodic(vec![], vec![period]).unwrap();
        Sturmian::new(&s, &InterceptSpec::Digits(digits), 12).unwrap()
    }

    #[test]
    fn closed_forms_at_index_zero() {
        let st = setup(3, vec![]);
        let cyc = families_from_words::<BigRational>(&st, 2, 1, 2).unwrap();
        assert_eq!(cyc[0].f1.value().unwrap(), rat(1, 6));
        assert_eq!(cyc[0].f2.value().unwrap(), rat(1, 7));
        assert_eq!(cyc[0].f4.value().unwrap(), rat(1, 7));
        assert_eq!(cyc[0].f2m1.num, BigRational::zero());
    }

    #[test]
    fn three_routes_agree() {
        for (period, digits, b, a) in [(3, vec![], 2, 1), (2, vec![1], 3, 3), (3, vec![0, 2], 2, 3), (1, vec![], 2, 3)] {
            let st = setup(period, digits);
            let words = families_from_words::<BigRational>(&st, b, a, 8).unwrap();
            let quads = element_quads::<BigRational>(&st, b, a, 8).unwrap();
            let chain = farey_chain(&quads, b);
            assert_eq!(words, chain);
            let mats = matrix_convergents(&raw_elements(&quads), b);
            assert_eq!(mats, flatten(&chain));
        }
    }

    #[test]
    fn residue_route_matches_exact() {
        let st = setup(2, vec![1]);
        let exact = families_from_words::<BigRational>(&st, 3, 3, 6).unwrap();
        let res = families_from_words::<Residues>(&st, 3, 3, 6).unwrap();
        for (e, r) in flatten(&exact).iter().zip(flatten(&res).iter()) {
            assert_eq!(Residues::from_bigint(&e.num.to_integer()), r.num);
            assert_eq!(Residues::from_bigint(&e.den.to_integer()), r.den);
        }
    }

    #[test]
    fn identities_hold_exactly() {
        let st = setup(3, vec![0, 2]);
        let cyc = families_from_words::<BigRational>(&st, 2, 3, 8).unwrap();
        let checks = check_identities(&st, 2, 3, &cyc).unwrap();
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
    }

    #[test]
    fn sigma_routes_agree() {
        let st = setup(2, vec![1]);
        let rec = sigma_recursive::<BigRational>(&st, 2, 3, 7).unwrap();
        for k in 1..=7 {
            assert_eq!(sigma_direct(&st, 2, 3, k).unwrap(), rec[k], "k = {k}");
        }
    }

    #[test]
    fn error_exponent_cases() {
        let st = setup(3, vec![]);
        let (u, v) = error_exponents(&st, 2).unwrap();
        assert_eq!(u, st.r(3).clone());
        assert_eq!(v, st.r(3) + st.q(2));
    }
}
