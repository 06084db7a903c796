//! The commutative coefficient ring `Z[H][q^{±1/2}]`.
//!
//! A [`QCoefficient`] is a finite sum of terms `n * h^a * q^{k/2}` where `n` is an
//! arbitrary-precision integer, `h^a` is a monomial in the formal exchange symbols
//! `h[k,r]` and `k` is the exponent of `q^{1/2}`. Half-integer powers of `q` are
//! stored as integer powers of `q^{1/2}`, so no rationals appear anywhere.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A formal exchange symbol `h[k,r]`; `k` is the 1-based direction, `r` the position
/// in the family `h_{k,0..d_k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HSymbol {
    pub k: u32,
    pub r: u32,
}

impl HSymbol {
    pub fn new(k: u32, r: u32) -> Self {
        HSymbol { k, r }
    }
}

impl fmt::Display for HSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h[{},{}]", self.k, self.r)
    }
}

/// `h^a * q^{qexp/2}` with a sparse, sorted, zero-free symbol multidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoeffMonomial {
    hdeg: Vec<(HSymbol, u32)>,
    qexp: i64,
}

impl CoeffMonomial {
    pub fn q_half(qexp: i64) -> Self {
        CoeffMonomial {
            hdeg: Vec::new(),
            qexp,
        }
    }

    pub fn symbol(s: HSymbol) -> Self {
        CoeffMonomial {
            hdeg: vec![(s, 1)],
            qexp: 0,
        }
    }

    /// Exponent of `q^{1/2}`.
    pub fn qexp(&self) -> i64 {
        self.qexp
    }

    pub fn hdeg(&self) -> &[(HSymbol, u32)] {
        &self.hdeg
    }

    pub fn exponent_of(&self, s: HSymbol) -> u32 {
        self.hdeg
            .binary_search_by(|(t, _)| t.cmp(&s))
            .map_or(0, |i| self.hdeg[i].1)
    }

    pub fn total_hdeg(&self) -> u32 {
        self.hdeg.iter().map(|(_, e)| e).sum()
    }

    pub fn has_symbols(&self) -> bool {
        !self.hdeg.is_empty()
    }

    fn mul(&self, other: &CoeffMonomial) -> CoeffMonomial {
        let mut hdeg = Vec::with_capacity(self.hdeg.len() + other.hdeg.len());
        let (mut i, mut j) = (0, 0);
        while i < self.hdeg.len() && j < other.hdeg.len() {
            let (a, ea) = self.hdeg[i];
            let (b, eb) = other.hdeg[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    hdeg.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    hdeg.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    hdeg.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        hdeg.extend_from_slice(&self.hdeg[i..]);
        hdeg.extend_from_slice(&other.hdeg[j..]);
        CoeffMonomial {
            hdeg,
            qexp: self.qexp + other.qexp,
        }
    }

    /// `self / other` when every symbol exponent stays nonnegative.
    fn div(&self, other: &CoeffMonomial) -> Option<CoeffMonomial> {
        let mut hdeg = self.hdeg.clone();
        for &(s, e) in &other.hdeg {
            let pos = hdeg.binary_search_by(|(t, _)| t.cmp(&s)).ok()?;
            match hdeg[pos].1.cmp(&e) {
                Ordering::Less => return None,
                Ordering::Equal => {
                    hdeg.remove(pos);
                }
                Ordering::Greater => hdeg[pos].1 -= e,
            }
        }
        Some(CoeffMonomial {
            hdeg,
            qexp: self.qexp - other.qexp,
        })
    }
}

// Graded by total symbol degree, then reverse-lexicographic on the symbols (a higher
// power of an earlier symbol sorts first), then by the power of q. The order is
// compatible with multiplication, which the division routine relies on.
impl Ord for CoeffMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_hdeg()
            .cmp(&other.total_hdeg())
            .then_with(|| {
                let (mut i, mut j) = (0, 0);
                loop {
                    match (self.hdeg.get(i), other.hdeg.get(j)) {
                        (None, None) => return Ordering::Equal,
                        (Some(_), None) => return Ordering::Less,
                        (None, Some(_)) => return Ordering::Greater,
                        (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                            Ordering::Less => return Ordering::Less,
                            Ordering::Greater => return Ordering::Greater,
                            Ordering::Equal if ea != eb => return eb.cmp(&ea),
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                        },
                    }
                }
            })
            .then_with(|| self.qexp.cmp(&other.qexp))
    }
}

impl PartialOrd for CoeffMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of `Z[H][q^{±1/2}]` in canonical form (no zero integers stored).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QCoefficient {
    terms: BTreeMap<CoeffMonomial, BigInt>,
}

impl QCoefficient {
    pub fn zero() -> Self {
        QCoefficient::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::from_term(CoeffMonomial::default(), n.into())
    }

    /// `q^{k/2}`.
    pub fn q_half(k: i64) -> Self {
        Self::from_term(CoeffMonomial::q_half(k), BigInt::one())
    }

    pub fn symbol(s: HSymbol) -> Self {
        Self::from_term(CoeffMonomial::symbol(s), BigInt::one())
    }

    pub fn from_term(mono: CoeffMonomial, n: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !n.is_zero() {
            terms.insert(mono, n);
        }
        QCoefficient { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, n)| *m == CoeffMonomial::default() && n.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoeffMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&CoeffMonomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn symbols(&self) -> BTreeSet<HSymbol> {
        self.terms
            .keys()
            .flat_map(|m| m.hdeg.iter().map(|(s, _)| *s))
            .collect()
    }

    pub fn has_symbols(&self) -> bool {
        self.terms.keys().any(CoeffMonomial::has_symbols)
    }

    /// Multiplies by `q^{k/2}`.
    pub fn mul_q_half(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        QCoefficient {
            terms: self
                .terms
                .iter()
                .map(|(m, n)| {
                    let mut m = m.clone();
                    m.qexp += k;
                    (m, n.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QCoefficient::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// When `self = ±q^{k/2}`, returns `(negative, k)`.
    pub fn as_unit(&self) -> Option<(bool, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, n) = self.terms.iter().next()?;
        if m.has_symbols() || !n.abs().is_one() {
            return None;
        }
        Some((n.is_negative(), m.qexp))
    }

    /// Multiplicative inverse, defined only for units `±q^{k/2}`.
    pub fn unit_inverse(&self) -> Option<Self> {
        let (neg, k) = self.as_unit()?;
        let n = if neg { -BigInt::one() } else { BigInt::one() };
        Some(Self::from_term(CoeffMonomial::q_half(-k), n))
    }

    /// True iff every stored integer is nonnegative.
    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|n| !n.is_negative())
    }

    /// Sets `q^{1/2} = 1`, leaving the symbols untouched.
    pub fn at_q_one(&self) -> Self {
        let mut out = QCoefficient::zero();
        for (m, n) in &self.terms {
            let mono = CoeffMonomial {
                hdeg: m.hdeg.clone(),
                qexp: 0,
            };
            out.add_term(mono, n.clone());
        }
        out
    }

    /// Substitutes values for the formal symbols.
    pub fn specialize(&self, assignment: &HashMap<HSymbol, QCoefficient>) -> Result<Self> {
        let mut out = QCoefficient::zero();
        for (m, n) in &self.terms {
            let mut term = Self::from_term(CoeffMonomial::q_half(m.qexp), n.clone());
            for &(s, e) in &m.hdeg {
                let value = assignment.get(&s).ok_or(Error::MissingAssignment(s))?;
                term = &term * &value.pow(e);
            }
            out += &term;
        }
        Ok(out)
    }

    fn add_term(&mut self, mono: CoeffMonomial, n: BigInt) {
        if n.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(n);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += n;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self -= n * mono * rhs`, in place.
    fn sub_scaled(&mut self, rhs: &QCoefficient, mono: &CoeffMonomial, n: &BigInt) {
        for (m, c) in &rhs.terms {
            self.add_term(m.mul(mono), -(c * n));
        }
    }

    fn min_max_q(&self) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for m in self.terms.keys() {
            lo = lo.min(m.qexp);
            hi = hi.max(m.qexp);
        }
        (lo, hi)
    }

    fn min_max_symbol(&self, s: HSymbol) -> (u32, u32) {
        let mut lo = u32::MAX;
        let mut hi = 0;
        for m in self.terms.keys() {
            let e = m.exponent_of(s);
            lo = lo.min(e);
            hi = hi.max(e);
        }
        (lo, hi)
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Leading terms are eliminated in the monomial order above. Every candidate
    /// quotient term is checked against the per-variable exponent box that any
    /// exact quotient must lie in, which also bounds the number of steps.
    pub fn divide_exact(&self, divisor: &QCoefficient) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(QCoefficient::zero());
        }
        if let Some(inv) = divisor.unit_inverse() {
            return Ok(self * &inv);
        }

        let (alo, ahi) = self.min_max_q();
        let (blo, bhi) = divisor.min_max_q();
        let (qlo, qhi) = (alo - blo, ahi - bhi);
        if qlo > qhi {
            return Err(Error::NotDivisible);
        }
        let mut sym_bounds = BTreeMap::new();
        for s in self.symbols().union(&divisor.symbols()) {
            let (alo, ahi) = self.min_max_symbol(*s);
            let (blo, bhi) = divisor.min_max_symbol(*s);
            let lo = alo as i64 - blo as i64;
            let hi = ahi as i64 - bhi as i64;
            if hi < lo.max(0) {
                return Err(Error::NotDivisible);
            }
            sym_bounds.insert(*s, (lo.max(0) as u32, hi as u32));
        }

        let (lead_m, lead_n) = divisor.leading_term().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quotient = QCoefficient::zero();
        while let Some((m, n)) = rem.leading_term() {
            let t = m.div(lead_m).ok_or(Error::NotDivisible)?;
            if t.qexp < qlo || t.qexp > qhi {
                return Err(Error::NotDivisible);
            }
            for (s, (lo, hi)) in &sym_bounds {
                let e = t.exponent_of(*s);
                if e < *lo || e > *hi {
                    return Err(Error::NotDivisible);
                }
            }
            let (c, r) = n.div_rem(lead_n);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            rem.sub_scaled(divisor, &t, &c);
            quotient.add_term(t, c);
        }
        if &(&quotient * divisor) != self {
            return Err(Error::NotDivisible);
        }
        Ok(quotient)
    }
}

impl From<i64> for QCoefficient {
    fn from(n: i64) -> Self {
        QCoefficient::from_int(n)
    }
}

impl AddAssign<&QCoefficient> for QCoefficient {
    fn add_assign(&mut self, rhs: &QCoefficient) {
        for (m, n) in &rhs.terms {
            self.add_term(m.clone(), n.clone());
        }
    }
}

impl SubAssign<&QCoefficient> for QCoefficient {
    fn sub_assign(&mut self, rhs: &QCoefficient) {
        for (m, n) in &rhs.terms {
            self.add_term(m.clone(), -n);
        }
    }
}

impl Add for &QCoefficient {
    type Output = QCoefficient;

    fn add(self, rhs: &QCoefficient) -> QCoefficient {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QCoefficient {
    type Output = QCoefficient;

    fn sub(self, rhs: &QCoefficient) -> QCoefficient {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &QCoefficient {
    type Output = QCoefficient;

    fn neg(self) -> QCoefficient {
        QCoefficient {
            terms: self.terms.iter().map(|(m, n)| (m.clone(), -n)).collect(),
        }
    }
}

impl Neg for QCoefficient {
    type Output = QCoefficient;

    fn neg(self) -> QCoefficient {
        -&self
    }
}

impl Mul for &QCoefficient {
    type Output = QCoefficient;

    fn mul(self, rhs: &QCoefficient) -> QCoefficient {
        let mut out = QCoefficient::zero();
        for (ma, na) in &self.terms {
            for (mb, nb) in &rhs.terms {
                out.add_term(ma.mul(mb), na * nb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for QCoefficient {
            type Output = QCoefficient;
            fn $f(self, rhs: QCoefficient) -> QCoefficient {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&QCoefficient> for QCoefficient {
            type Output = QCoefficient;
            fn $f(self, rhs: &QCoefficient) -> QCoefficient {
                (&self).$f(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

fn fmt_q(qexp: i64) -> Option<String> {
    match qexp {
        0 => None,
        2 => Some("q".to_string()),
        k if k % 2 == 0 && k > 0 => Some(format!("q^{}", k / 2)),
        k if k % 2 == 0 => Some(format!("q^({})", k / 2)),
        k => Some(format!("q^({k}/2)")),
    }
}

/// Text of `|n| * mono`, e.g. `2*h[1,1]^2*q^(1/2)`; `1` for the bare unit.
pub(crate) fn fmt_unsigned_term(mono: &CoeffMonomial, n: &BigInt) -> String {
    let mut factors = Vec::new();
    let abs = n.abs();
    if !abs.is_one() {
        factors.push(abs.to_string());
    }
    for (s, e) in &mono.hdeg {
        if *e == 1 {
            factors.push(s.to_string());
        } else {
            factors.push(format!("{s}^{e}"));
        }
    }
    if let Some(q) = fmt_q(mono.qexp) {
        factors.push(q);
    }
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

impl fmt::Display for QCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, n)) in self.terms.iter().enumerate() {
            let body = fmt_unsigned_term(m, n);
            match (i, n.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
