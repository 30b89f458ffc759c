//! Binary words: Sturmian prefixes, the recursive families `M, T, R, V`, and word values.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::cf_core::SurdSum;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ostrowski::Sturmian;

/// Packed binary word.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BinaryWord {
    bits: Vec<u64>,
    len: usize,
    ones: usize,
}

impl BinaryWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut w = BinaryWord::new();
        for ch in s.chars() {
            match ch {
                '0' => w.push(false),
                '1' => w.push(true),
                _ => return Err(Error::Parse(format!("not a binary letter: {ch}"))),
            }
        }
        Ok(w)
    }

    pub fn zeros_then_one(zeros: u64) -> Self {
        let mut w = BinaryWord::new();
        for _ in 0..zeros {
            w.push(false);
        }
        w.push(true);
        w
    }

    pub fn push(&mut self, bit: bool) {
        let (i, j) = (self.len / 64, self.len % 64);
        if j == 0 {
            self.bits.push(0);
        }
        if bit {
            self.bits[i] |= 1 << j;
            self.ones += 1;
        }
        self.len += 1;
    }

    /// Letter at 0-based position `i`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    pub fn append(&mut self, other: &BinaryWord) {
        if self.len.is_multiple_of(64) {
            self.bits.truncate(self.len / 64);
            self.bits.extend_from_slice(&other.bits);
            self.len += other.len;
            self.ones += other.ones;
            return;
        }
        for i in 0..other.len {
            self.push(other.get(i));
        }
    }

    pub fn repeat(&self, n: u64) -> BinaryWord {
        let mut out = BinaryWord::new();
        for _ in 0..n {
            out.append(self);
        }
        out
    }

    pub fn concat(parts: &[&BinaryWord]) -> BinaryWord {
        let mut out = BinaryWord::new();
        for p in parts {
            out.append(p);
        }
        out
    }

    pub fn prefix(&self, n: usize) -> BinaryWord {
        let mut out = BinaryWord::new();
        for i in 0..n.min(self.len) {
            out.push(self.get(i));
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Length of the longest common prefix.
    pub fn common_prefix(&self, other: &BinaryWord) -> usize {
        let n = self.len.min(other.len);
        let full = n / 64;
        for i in 0..full {
            if self.bits[i] != other.bits[i] {
                return i * 64 + (self.bits[i] ^ other.bits[i]).trailing_zeros() as usize;
            }
        }
        (full * 64..n).find(|&i| self.get(i) != other.get(i)).unwrap_or(n)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 80 {
            write!(f, "BinaryWord({self})")
        } else {
            write!(f, "BinaryWord(len={}, ones={}, {}...)", self.len, self.ones, self.prefix(40))
        }
    }
}

/// `W(b, a) = sum_n w_n b^{len-n} a^{#ones after n}`, by splitting in halves.
pub fn word_value<F: Field>(w: &BinaryWord, b: u64, a: u64) -> F {
    fn rec<F: Field>(w: &BinaryWord, lo: usize, hi: usize, b: &F, a: &F, bi: u64, ai: u64) -> (F, usize) {
        if hi - lo <= 64 {
            let mut v = F::zero();
            let mut ones = 0;
            for i in lo..hi {
                if w.get(i) {
                    v = v * b.clone() * a.clone() + F::one();
                    ones += 1;
                } else {
                    v = v * b.clone();
                }
            }
            return (v, ones);
        }
        let mid = lo + (hi - lo) / 2;
        let (y, oy) = rec(w, lo, mid, b, a, bi, ai);
        let (z, oz) = rec(w, mid, hi, b, a, bi, ai);
        let shift = F::monomial(bi, &BigInt::from(hi - mid), ai, &BigInt::from(oz));
        (shift * y + z, oy + oz)
    }
    let bf = F::from_u64(b);
    let af = F::from_u64(a);
    rec(w, 0, w.len(), &bf, &af, b, a).0
}

/// Value of the eventually periodic word `Y Z Z Z ...` at `(1/b, 1/a)`.
pub fn periodic_value<F: Field>(y: &BinaryWord, z: &BinaryWord, b: u64, a: u64) -> Result<F> {
    if z.is_empty() {
        return Err(Error::InvalidInput("period word is empty".into()));
    }
    let yz = BinaryWord::concat(&[y, z]);
    let vy: F = word_value(y, b, a);
    let vyz: F = word_value(&yz, b, a);
    let den = F::monomial(b, &BigInt::from(y.len()), a, &BigInt::from(y.ones()))
        * (F::monomial(b, &BigInt::from(z.len()), a, &BigInt::from(z.ones())) - F::one());
    Ok((vyz - vy) * den.inv().expect("positive denominator"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `floor(n theta + rho) - floor((n-1) theta + rho)`
    Lower,
    /// the same with ceilings
    Upper,
}

const FIX: u32 = 80;

fn fixed_bounds(x: &SurdSum) -> (u128, u128) {
    let iv = x.enclosure(FIX + 8);
    let sc = |d: &crate::cf_core::Dyadic, up: bool| -> u128 {
        let shifted = crate::cf_core::Dyadic::new(d.mantissa().clone(), d.exponent() + FIX as i64);
        let v = if up { shifted.ceil() } else { shifted.floor() };
        v.to_u128().unwrap_or(0)
    };
    (sc(iv.lo(), false), sc(iv.hi(), true))
}

/// First `n` letters `s_1..s_n` of the Sturmian word with slope `theta` and intercept `rho`.
pub fn sturmian_prefix(theta: &SurdSum, rho: &SurdSum, n: usize, variant: Variant, max_bits: u64) -> Result<BinaryWord> {
    assert!((n as u64) < (1u64 << 40), "prefix too long for the fixed point path");
    let (tlo, thi) = fixed_bounds(theta);
    let (rlo, rhi) = fixed_bounds(rho);
    let one = 1u128 << FIX;
    let exact = |m: usize| -> Result<BigInt> {
        let x = &theta.scale_int(&BigInt::from(m)) + rho;
        match variant {
            Variant::Lower => x.floor(max_bits),
            Variant::Upper => x.ceil(max_bits),
        }
        .map_err(|_| Error::UndecidableLetter { index: m, bits: max_bits })
    };
    let level = |m: usize| -> Result<u128> {
        let lo = m as u128 * tlo + rlo;
        let hi = m as u128 * thi + rhi;
        let (a, b) = match variant {
            Variant::Lower => (lo >> FIX, hi >> FIX),
            Variant::Upper => ((lo + one - 1) >> FIX, (hi + one - 1) >> FIX),
        };
        if a == b {
            Ok(a)
        } else {
            Ok(exact(m)?.to_u128().unwrap())
        }
    };
    let mut w = BinaryWord::new();
    let mut prev = level(0)?;
    for m in 1..=n {
        let cur = level(m)?;
        w.push(cur - prev == 1);
        prev = cur;
    }
    Ok(w)
}

/// Materialised families `M_k, T_k, R_k, V_k`.
#[derive(Clone, Debug)]
pub struct WordFamily {
    /// `M_k` at index `k + 1`, starting from `M_{-1} = 1`
    m: Vec<BinaryWord>,
    t: Vec<BinaryWord>,
    r: Vec<BinaryWord>,
    v: Vec<BinaryWord>,
}

impl WordFamily {
    pub fn m(&self, k: i64) -> &BinaryWord {
        &self.m[(k + 1) as usize]
    }
    pub fn t(&self, k: usize) -> &BinaryWord {
        &self.t[k]
    }
    pub fn r(&self, k: usize) -> &BinaryWord {
        &self.r[k]
    }
    pub fn v(&self, k: usize) -> &BinaryWord {
        &self.v[k]
    }
    /// Largest `k` for which all four words are present.
    pub fn last_index(&self) -> usize {
        self.v.len() - 1
    }
}

/// Build the families through index `depth`, failing if a word would exceed `max_len`.
pub fn build_word_family(st: &Sturmian, depth: usize, max_len: usize) -> Result<WordFamily> {
    let fam = build_word_family_capped(st, depth, max_len);
    if fam.last_index() < depth {
        return Err(Error::LengthCapExceeded { last_completed: fam.last_index() as i64 });
    }
    Ok(fam)
}

/// Build as far as `depth` allows without any word exceeding `max_len`.
pub fn build_word_family_capped(st: &Sturmian, depth: usize, max_len: usize) -> WordFamily {
    let depth = depth.min(st.depth());
    let mut m = vec![BinaryWord::parse("1").unwrap(), BinaryWord::parse("0").unwrap()];
    let mut t = vec![BinaryWord::new()];
    let mut r = vec![BinaryWord::parse("0").unwrap()];
    let mut v = vec![BinaryWord::parse("0").unwrap()];
    for k in 0..depth {
        // words at index k + 1
        let q_next = st.q(k as i64 + 1).to_usize().unwrap_or(usize::MAX);
        if q_next > max_len {
            break;
        }
        let a = st.a(k + 1);
        let b = st.b(k + 1);
        let mk = &m[k + 1];
        let mprev = &m[k];
        let m_next = if k == 0 {
            BinaryWord::zeros_then_one(a - 1)
        } else {
            BinaryWord::concat(&[&mk.repeat(a), mprev])
        };
        let t_next = BinaryWord::concat(&[&mk.repeat(b), &t[k]]);
        let r_next = if k == 0 {
            BinaryWord::zeros_then_one(a - b - 1)
        } else if a == b {
            r[k - 1].clone()
        } else {
            BinaryWord::concat(&[&r[k], &mk.repeat(a - b - 1), mprev])
        };
        let v_next = BinaryWord::concat(&[&r_next, &t_next]);
        m.push(m_next);
        t.push(t_next);
        r.push(r_next);
        v.push(v_next);
    }
    WordFamily { m, t, r, v }
}

/// A word known only through its value at `(b, a)`, length and number of ones.
#[derive(Clone, Debug, PartialEq)]
pub struct WordSym<F> {
    pub value: F,
    pub len: BigInt,
    pub ones: BigInt,
}

impl<F: Field> WordSym<F> {
    pub fn empty() -> Self {
        WordSym { value: F::zero(), len: BigInt::zero(), ones: BigInt::zero() }
    }

    pub fn letter(bit: bool) -> Self {
        if bit {
            WordSym { value: F::one(), len: BigInt::one(), ones: BigInt::one() }
        } else {
            WordSym { value: F::zero(), len: BigInt::one(), ones: BigInt::zero() }
        }
    }

    pub fn from_word(w: &BinaryWord, b: u64, a: u64) -> Self {
        WordSym { value: word_value(w, b, a), len: BigInt::from(w.len()), ones: BigInt::from(w.ones()) }
    }

    /// Value of `self` followed by `z`.
    pub fn concat(&self, z: &WordSym<F>, b: u64, a: u64) -> Self {
        WordSym {
            value: F::monomial(b, &z.len, a, &z.ones) * self.value.clone() + z.value.clone(),
            len: &self.len + &z.len,
            ones: &self.ones + &z.ones,
        }
    }

    pub fn repeat(&self, n: u64, b: u64, a: u64) -> Self {
        let mut acc = WordSym::empty();
        let mut base = self.clone();
        let mut n = n;
        // concatenation of copies of one word commutes, so binary powering is fine
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.concat(&base, b, a);
            }
            n >>= 1;
            if n > 0 {
                base = base.concat(&base, b, a);
            }
        }
        acc
    }
}

/// Families `M, T, R, V` kept symbolically; no length cap applies.
#[derive(Clone, Debug)]
pub struct SymbolicFamily<F> {
    m: Vec<WordSym<F>>,
    t: Vec<WordSym<F>>,
    r: Vec<WordSym<F>>,
    v: Vec<WordSym<F>>,
}

impl<F: Field> SymbolicFamily<F> {
    pub fn build(st: &Sturmian, depth: usize, b: u64, a: u64) -> Result<Self> {
        st.require(depth)?;
        let one = WordSym::<F>::letter(true);
        let zero = WordSym::<F>::letter(false);
        let mut m = vec![one.clone(), zero.clone()];
        let mut t = vec![WordSym::empty()];
        let mut r = vec![zero.clone()];
        let mut v = vec![zero.clone()];
        for k in 0..depth {
            let ak = st.a(k + 1);
            let bk = st.b(k + 1);
            let (m_next, r_next) = if k == 0 {
                (
                    zero.repeat(ak - 1, b, a).concat(&one, b, a),
                    zero.repeat(ak - bk - 1, b, a).concat(&one, b, a),
                )
            } else {
                let mn = m[k + 1].repeat(ak, b, a).concat(&m[k], b, a);
                let rn = if ak == bk {
                    r[k - 1].clone()
                } else {
                    r[k].concat(&m[k + 1].repeat(ak - bk - 1, b, a), b, a).concat(&m[k], b, a)
                };
                (mn, rn)
            };
            let t_next = m[k + 1].repeat(bk, b, a).concat(&t[k], b, a);
            let v_next = r_next.concat(&t_next, b, a);
            m.push(m_next);
            t.push(t_next);
            r.push(r_next);
            v.push(v_next);
        }
        let fam = SymbolicFamily { m, t, r, v };
        for k in 0..=depth {
            let ki = k as i64;
            assert_eq!(&fam.m(ki).len, st.q(ki), "|M_{k}| != q_{k}");
            assert_eq!(&fam.m(ki).ones, st.p(ki), "ones(M_{k}) != p_{k}");
            assert_eq!(&fam.t(k).len, st.t(k), "|T_{k}| != t_{k}");
            assert_eq!(&fam.r(k).len, st.r(k), "|R_{k}| != r_{k}");
            assert_eq!(&fam.r(k).ones, st.r_tilde(k), "ones(R_{k}) != r~_{k}");
        }
        Ok(fam)
    }

    pub fn m(&self, k: i64) -> &WordSym<F> {
        &self.m[(k + 1) as usize]
    }
    pub fn t(&self, k: usize) -> &WordSym<F> {
        &self.t[k]
    }
    pub fn r(&self, k: usize) -> &WordSym<F> {
        &self.r[k]
    }
    pub fn v(&self, k: usize) -> &WordSym<F> {
        &self.v[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf_core::SlopeSpec;
    use crate::ostrowski::InterceptSpec;
    use num_rational::BigRational;

    #[test]
    fn word_value_example() {
        let w = BinaryWord::parse("101").unwrap();
        let v: BigRational = word_value(&w, 2, 3);
        assert_eq!(v, BigRational::from_integer(13.into()));
    }

    #[test]
    fn word_value_long_matches_horner() {
        let text: String = (0..300).map(|i| if (i * 7) % 5 < 2 { '1' } else { '0' }).collect();
        let w = BinaryWord::parse(&text).unwrap();
        let mut h = BigInt::zero();
        for ch in text.chars() {
            h = if ch == '1' { h * 6 + 1 } else { h * 2 };
        }
        let v: BigRational = word_value(&w, 2, 3);
        assert_eq!(v.to_integer(), h);
    }

    #[test]
    fn periodic_single_one() {
        let z = BinaryWord::parse("1").unwrap();
        let v: BigRational = periodic_value(&BinaryWord::new(), &z, 2, 3).unwrap();
        assert_eq!(v, BigRational::new(1.into(), 5.into()));
    }

    #[test]
    fn fibonacci_prefix() {
        let s = SlopeSpec::periodic(vec![], vec![1]).unwrap();
        let st = Sturmian::new(&s, &InterceptSpec::Digits(vec![]), 4).unwrap();
        let w = sturmian_prefix(st.theta(), st.rho(), 12, Variant::Lower, 4096).unwrap();
        assert_eq!(w.to_string(), "101101011011");
    }

    #[test]
    fn families_have_expected_lengths() {
        let s = SlopeSpec::periodic(vec![], vec![2]).unwrap();
        let st = Sturmian::new(&s, &InterceptSpec::Digits(vec![1, 0, 2]), 8).unwrap();
        let fam = build_word_family(&st, 8, 1 << 20).unwrap();
        for k in 0..=8usize {
            assert_eq!(BigInt::from(fam.m(k as i64).len()), *st.q(k as i64));
            assert_eq!(BigInt::from(fam.v(k).len()), *st.q(k as i64));
            assert_eq!(BigInt::from(fam.r(k).len()), *st.r(k));
        }
        let sym = SymbolicFamily::<BigRational>::build(&st, 8, 3, 2).unwrap();
        for k in 0..=8usize {
            assert_eq!(sym.v(k).value, word_value::<BigRational>(fam.v(k), 3, 2));
        }
    }

    #[test]
    fn cap_reports_last_index() {
        let s = SlopeSpec::periodic(vec![], vec![1]).unwrap();
        let st = Sturmian::new(&s, &InterceptSpec::Digits(vec![]), 30).unwrap();
        match build_word_family(&st, 30, 100) {
            Err(Error::LengthCapExceeded { last_completed }) => assert_eq!(last_completed, 10),
            other => panic!("unexpected {other:?}"),
        }
    }
}
