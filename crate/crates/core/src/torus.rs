//! The quantum torus `T(Λ)`: basis `X(c)`, `c ∈ Z^m`, with
//! `X(c) X(d) = q^{Λ(c,d)/2} X(c + d)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coeff::{fmt_unsigned_term, QCoefficient};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub type Exponent = Vec<i64>;

/// The skew form `Λ` defining a quantum torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusContext {
    lambda: IntMatrix,
}

impl TorusContext {
    pub fn new(lambda: IntMatrix) -> Result<Arc<Self>> {
        if let Some((row, col)) = lambda.skew_violation() {
            return Err(Error::NotSkewSymmetric { row, col });
        }
        Ok(Arc::new(TorusContext { lambda }))
    }

    pub fn dim(&self) -> usize {
        self.lambda.rows()
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    /// `Λ(a, b) = a^T Λ b`.
    pub fn skew_form(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.lambda.bilinear(a, b))
    }

    fn check_dim(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }
}

fn add_vec(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Total degree first, then lexicographic.
fn graded_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// A finite `QCoefficient`-combination of basis elements `X(c)`.
#[derive(Clone)]
pub struct TorusElement {
    ctx: Arc<TorusContext>,
    terms: BTreeMap<Exponent, QCoefficient>,
}

impl TorusElement {
    pub fn zero(ctx: &Arc<TorusContext>) -> Self {
        TorusElement {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<TorusContext>) -> Self {
        Self::constant(ctx, QCoefficient::one())
    }

    pub fn constant(ctx: &Arc<TorusContext>, c: QCoefficient) -> Self {
        Self::monomial(ctx, vec![0; ctx.dim()], c)
    }

    /// `X(c)`.
    pub fn basis(ctx: &Arc<TorusContext>, c: Exponent) -> Self {
        Self::monomial(ctx, c, QCoefficient::one())
    }

    /// `X_k = X(e_k)`, 0-based.
    pub fn generator(ctx: &Arc<TorusContext>, k: usize) -> Self {
        let mut e = vec![0; ctx.dim()];
        e[k] = 1;
        Self::basis(ctx, e)
    }

    pub fn monomial(ctx: &Arc<TorusContext>, c: Exponent, coeff: QCoefficient) -> Self {
        assert_eq!(c.len(), ctx.dim(), "exponent length must match torus rank");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(c, coeff);
        }
        TorusElement {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    /// Builds an element from `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms(
        ctx: &Arc<TorusContext>,
        terms: impl IntoIterator<Item = (Exponent, QCoefficient)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ctx);
        for (c, a) in terms {
            ctx.check_dim(&c)?;
            out.add_term(c, &a);
        }
        Ok(out)
    }

    pub fn context(&self) -> &Arc<TorusContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &QCoefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, c: &[i64]) -> Option<&QCoefficient> {
        self.terms.get(c)
    }

    pub fn same_context(&self, other: &TorusElement) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    fn check_context(&self, other: &TorusElement) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Returns the sole term when the element is `a * X(c)`.
    pub fn as_monomial(&self) -> Option<(&Exponent, &QCoefficient)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Inverse of `±q^{k/2} X(c)`; `None` for anything else.
    pub fn monomial_inverse(&self) -> Option<TorusElement> {
        let (c, a) = self.as_monomial()?;
        let inv = a.unit_inverse()?;
        let neg: Exponent = c.iter().map(|x| -x).collect();
        Some(Self::monomial(&self.ctx, neg, inv))
    }

    fn add_term(&mut self, c: Exponent, a: &QCoefficient) {
        if a.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(c) {
            Entry::Vacant(v) => {
                v.insert(a.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += a;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, a: &QCoefficient) -> TorusElement {
        let mut out = Self::zero(&self.ctx);
        for (c, b) in &self.terms {
            out.add_term(c.clone(), &(b * a));
        }
        out
    }

    pub fn mul_q_half(&self, k: i64) -> TorusElement {
        TorusElement {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(c, a)| (c.clone(), a.mul_q_half(k)))
                .collect(),
        }
    }

    pub fn map_coefficients(
        &self,
        mut f: impl FnMut(&QCoefficient) -> Result<QCoefficient>,
    ) -> Result<TorusElement> {
        let mut out = Self::zero(&self.ctx);
        for (c, a) in &self.terms {
            out.add_term(c.clone(), &f(a)?);
        }
        Ok(out)
    }

    /// The same element read in another torus of the same rank.
    pub fn with_context(&self, ctx: &Arc<TorusContext>) -> Result<TorusElement> {
        if ctx.dim() != self.ctx.dim() {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim(),
                found: self.ctx.dim(),
            });
        }
        Ok(TorusElement {
            ctx: Arc::clone(ctx),
            terms: self.terms.clone(),
        })
    }

    /// Product in the torus; fails if the operands live in different tori.
    pub fn t_mul(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_context(other)?;
        let mut out = Self::zero(&self.ctx);
        for (c, a) in &self.terms {
            for (d, b) in &other.terms {
                let twist = self.ctx.lambda.bilinear(c, d);
                out.add_term(add_vec(c, d), &(a * b).mul_q_half(twist));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> TorusElement {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Right multiplication by the basis element `X(s)`.
    fn shift_right(&self, s: &[i64]) -> TorusElement {
        let mut out = Self::zero(&self.ctx);
        for (c, a) in &self.terms {
            let twist = self.ctx.lambda.bilinear(c, s);
            out.terms.insert(add_vec(c, s), a.mul_q_half(twist));
        }
        out
    }

    /// Left multiplication by the basis element `X(s)`.
    fn shift_left(&self, s: &[i64]) -> TorusElement {
        let mut out = Self::zero(&self.ctx);
        for (c, a) in &self.terms {
            let twist = self.ctx.lambda.bilinear(s, c);
            out.terms.insert(add_vec(s, c), a.mul_q_half(twist));
        }
        out
    }

    fn min_max(&self) -> (Exponent, Exponent) {
        let m = self.ctx.dim();
        let mut lo = vec![i64::MAX; m];
        let mut hi = vec![i64::MIN; m];
        for c in self.terms.keys() {
            for j in 0..m {
                lo[j] = lo[j].min(c[j]);
                hi[j] = hi[j].max(c[j]);
            }
        }
        (lo, hi)
    }

    fn graded_lead(&self) -> Option<(&Exponent, &QCoefficient)> {
        self.terms.iter().max_by(|a, b| graded_cmp(a.0, b.0))
    }

    /// Exact right division: the unique `Q` with `Q * divisor = self`.
    pub fn right_divide_exact(&self, divisor: &TorusElement) -> Result<TorusElement> {
        self.divide_exact(divisor, Side::Right)
    }

    /// Exact left division: the unique `Q` with `divisor * Q = self`.
    pub fn left_divide_exact(&self, divisor: &TorusElement) -> Result<TorusElement> {
        self.divide_exact(divisor, Side::Left)
    }

    // Both operands are first moved into the nonnegative orthant by monomial shifts
    // (the quotient's exponent box is min(N)-min(D) ..= max(N)-max(D) per coordinate,
    // so after the second shift it starts at the origin). Leading terms are then
    // eliminated in graded-lex order, which is a well-order on N^m, and every
    // candidate quotient exponent is checked against the box.
    fn divide_exact(&self, divisor: &TorusElement, side: Side) -> Result<TorusElement> {
        self.check_context(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }

        let (dlo, dhi) = divisor.min_max();
        let neg_dlo: Exponent = dlo.iter().map(|x| -x).collect();
        // Shifting the divisor and the dividend on the divisor's side by X(-min D)
        // leaves the quotient unchanged.
        let (d_shift, n_shift) = match side {
            Side::Right => (divisor.shift_right(&neg_dlo), self.shift_right(&neg_dlo)),
            Side::Left => (divisor.shift_left(&neg_dlo), self.shift_left(&neg_dlo)),
        };
        let (nlo, nhi) = n_shift.min_max();
        let qlo = nlo.clone();
        let qhi = sub_vec(&nhi, &sub_vec(&dhi, &dlo));
        if qlo.iter().zip(&qhi).any(|(lo, hi)| lo > hi) {
            return Err(Error::NotDivisible);
        }
        let neg_qlo: Exponent = qlo.iter().map(|x| -x).collect();
        let width = sub_vec(&qhi, &qlo);
        // Shift the quotient (and the dividend on the quotient's side) to start at 0.
        let mut rem = match side {
            Side::Right => n_shift.shift_left(&neg_qlo),
            Side::Left => n_shift.shift_right(&neg_qlo),
        };

        let (lead_c, lead_a) = {
            let (c, a) = d_shift.graded_lead().expect("nonzero divisor");
            (c.clone(), a.clone())
        };
        let mut quotient = Self::zero(&self.ctx);
        while let Some((c, a)) = rem.graded_lead() {
            let e = sub_vec(c, &lead_c);
            if e.iter().zip(&width).any(|(x, w)| *x < 0 || x > w) {
                return Err(Error::NotDivisible);
            }
            let twist = match side {
                Side::Right => self.ctx.lambda.bilinear(&e, &lead_c),
                Side::Left => self.ctx.lambda.bilinear(&lead_c, &e),
            };
            let coeff = a.divide_exact(&lead_a)?.mul_q_half(-twist);
            let term = Self::monomial(&self.ctx, e.clone(), coeff.clone());
            let product = match side {
                Side::Right => &term * &d_shift,
                Side::Left => &d_shift * &term,
            };
            rem = &rem - &product;
            quotient.add_term(e, &coeff);
        }

        let quotient = match side {
            Side::Right => quotient.shift_left(&qlo),
            Side::Left => quotient.shift_right(&qlo),
        };
        let check = match side {
            Side::Right => &quotient * divisor,
            Side::Left => divisor * &quotient,
        };
        if &check != self {
            return Err(Error::NotDivisible);
        }
        Ok(quotient)
    }

    /// The integer `t` with `self * other = q^t * other * self`, if one exists.
    pub fn q_commutation_exponent(&self, other: &TorusElement) -> Result<Option<i64>> {
        self.check_context(other)?;
        let ab = self * other;
        let ba = other * self;
        let Some((c, ba_lead)) = ba.terms.iter().next() else {
            return Ok(if ab.is_zero() { Some(0) } else { None });
        };
        let Some(ab_lead) = ab.terms.get(c) else {
            return Ok(None);
        };
        let ratio = match ab_lead.divide_exact(ba_lead) {
            Ok(r) => r,
            Err(_) => return Ok(None),
        };
        let Some((false, k)) = ratio.as_unit() else {
            return Ok(None);
        };
        if k % 2 != 0 {
            return Ok(None);
        }
        Ok((ab == ba.mul_q_half(k)).then_some(k / 2))
    }

    /// Renders the element as ordered monomials `X1^{c1} ... Xm^{cm}`, absorbing
    /// the prefactor `q^{(1/2) Σ_{l<k} c_l c_k λ_{kl}}` into each coefficient.
    pub fn ordered_form(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (c, a)) in self.terms.iter().enumerate() {
            let mut pref = 0;
            for k in 0..c.len() {
                for l in 0..k {
                    pref += c[l] * c[k] * self.ctx.lambda[(k, l)];
                }
            }
            let coeff = a.mul_q_half(pref);
            let mut factors = Vec::new();
            for (k, &e) in c.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("X{}", k + 1)),
                    e if e > 0 => factors.push(format!("X{}^{e}", k + 1)),
                    e => factors.push(format!("X{}^({e})", k + 1)),
                }
            }
            write_term(&mut out, idx == 0, &coeff, &factors.join("*"));
        }
        out
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// Appends `coeff * basis` with canonical sign handling; an empty `basis` means 1.
fn write_term(out: &mut String, first: bool, coeff: &QCoefficient, basis: &str) {
    let (negative, body) = if let Some((m, n)) = coeff.terms().next().filter(|_| coeff.len() == 1) {
        let unsigned = fmt_unsigned_term(m, n);
        let body = match (unsigned.as_str(), basis.is_empty()) {
            (_, true) => unsigned,
            ("1", false) => basis.to_string(),
            (_, false) => format!("{unsigned}*{basis}"),
        };
        (n < &num_bigint::BigInt::from(0), body)
    } else if basis.is_empty() {
        (false, format!("({coeff})"))
    } else {
        (false, format!("({coeff})*{basis}"))
    };
    match (first, negative) {
        (true, false) => out.push_str(&body),
        (true, true) => {
            out.push('-');
            out.push_str(&body);
        }
        (false, false) => {
            out.push_str(" + ");
            out.push_str(&body);
        }
        (false, true) => {
            out.push_str(" - ");
            out.push_str(&body);
        }
    }
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl std::hash::Hash for TorusElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical text: terms in lexicographic order of exponents, basis printed `X(c1,...,cm)`.
impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (idx, (c, a)) in self.terms.iter().enumerate() {
            let basis = format!(
                "X({})",
                c.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            );
            write_term(&mut out, idx == 0, a, &basis);
        }
        f.write_str(&out)
    }
}

impl Add for &TorusElement {
    type Output = TorusElement;

    fn add(self, rhs: &TorusElement) -> TorusElement {
        assert!(
            self.same_context(rhs),
            "operands live in different quantum tori"
        );
        let mut out = self.clone();
        for (c, a) in &rhs.terms {
            out.add_term(c.clone(), a);
        }
        out
    }
}

impl Sub for &TorusElement {
    type Output = TorusElement;

    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self + &(-rhs)
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;

    fn neg(self) -> TorusElement {
        TorusElement {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(c, a)| (c.clone(), -a)).collect(),
        }
    }
}

/// Panics on a context mismatch; use [`TorusElement::t_mul`] for the checked form.
impl Mul for &TorusElement {
    type Output = TorusElement;

    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.t_mul(rhs)
            .expect("operands live in different quantum tori")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::HSymbol;

    fn ctx2() -> Arc<TorusContext> {
        TorusContext::new(IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap()).unwrap()
    }

    fn x(ctx: &Arc<TorusContext>, c: &[i64]) -> TorusElement {
        TorusElement::basis(ctx, c.to_vec())
    }

    #[test]
    fn skew_form_examples() {
        let ctx = ctx2();
        assert_eq!(ctx.skew_form(&[1, 0], &[0, 1]).unwrap(), 1);
        assert_eq!(ctx.skew_form(&[3, -2], &[3, -2]).unwrap(), 0);
        assert_eq!(ctx.skew_form(&[1, 1], &[1, -1]).unwrap(), -2);
        assert!(matches!(
            ctx.skew_form(&[1], &[0, 1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_skew_lambda() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(
            TorusContext::new(m),
            Err(Error::NotSkewSymmetric { .. })
        ));
    }

    #[test]
    fn multiplication_examples() {
        let ctx = ctx2();
        let p = &x(&ctx, &[1, 0]) * &x(&ctx, &[0, 1]);
        assert_eq!(p, x(&ctx, &[1, 1]).mul_q_half(1));
        assert_eq!(
            &x(&ctx, &[2, -3]) * &x(&ctx, &[-2, 3]),
            TorusElement::one(&ctx)
        );
        let s = &(&x(&ctx, &[1, 0]) + &x(&ctx, &[0, 1])) * &x(&ctx, &[1, 0]);
        assert_eq!(s, &x(&ctx, &[2, 0]) + &x(&ctx, &[1, 1]).mul_q_half(-1));
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = x(&ctx2(), &[1, 0]);
        let other =
            TorusContext::new(IntMatrix::from_rows(&[vec![0, 2], vec![-2, 0]]).unwrap()).unwrap();
        let b = x(&other, &[0, 1]);
        assert_eq!(a.t_mul(&b), Err(Error::ContextMismatch));
    }

    #[test]
    fn right_division_examples() {
        let ctx = ctx2();
        let q = x(&ctx, &[1, 1])
            .right_divide_exact(&x(&ctx, &[0, 1]))
            .unwrap();
        assert_eq!(q, x(&ctx, &[1, 0]).mul_q_half(-1));

        let one = TorusElement::one(&ctx);
        let n = &x(&ctx, &[1, 0]) + &one;
        let d = &x(&ctx, &[0, 1]) + &one;
        assert_eq!(n.right_divide_exact(&d), Err(Error::NotDivisible));
        assert_eq!(
            n.right_divide_exact(&TorusElement::zero(&ctx)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn left_division_mirrors_right() {
        let ctx = ctx2();
        let q = x(&ctx, &[1, 1])
            .left_divide_exact(&x(&ctx, &[0, 1]))
            .unwrap();
        assert_eq!(&x(&ctx, &[0, 1]) * &q, x(&ctx, &[1, 1]));
        assert_eq!(q, x(&ctx, &[1, 0]).mul_q_half(1));
    }

    #[test]
    fn division_with_negative_exponents_and_symbols() {
        let ctx = ctx2();
        let h = QCoefficient::symbol(HSymbol::new(1, 1));
        let a = &TorusElement::monomial(&ctx, vec![-1, 2], h.clone()) + &x(&ctx, &[0, -3]);
        let d = &(&x(&ctx, &[-2, 0]) + &TorusElement::monomial(&ctx, vec![1, 1], h))
            + &x(&ctx, &[0, 0]);
        let n = &a * &d;
        assert_eq!(n.right_divide_exact(&d).unwrap(), a);
        let n = &d * &a;
        assert_eq!(n.left_divide_exact(&d).unwrap(), a);
    }

    #[test]
    fn commutation_exponent() {
        let ctx = ctx2();
        let x1 = x(&ctx, &[1, 0]);
        let x2 = x(&ctx, &[0, 1]);
        assert_eq!(x1.q_commutation_exponent(&x2).unwrap(), Some(1));
        assert_eq!(x1.q_commutation_exponent(&x1).unwrap(), Some(0));
        let y = &x1 + &x2;
        assert_eq!(x1.q_commutation_exponent(&y).unwrap(), None);
    }

    #[test]
    fn ordered_form_examples() {
        let ctx = ctx2();
        assert_eq!(x(&ctx, &[1, 1]).ordered_form(), "q^(-1/2)*X1*X2");
        assert_eq!(x(&ctx, &[1, 0]).ordered_form(), "X1");
        assert_eq!(TorusElement::zero(&ctx).ordered_form(), "0");
        assert_eq!(x(&ctx, &[-1, 2]).ordered_form(), "q*X1^(-1)*X2^2");
    }

    #[test]
    fn display_examples() {
        let ctx = ctx2();
        let h = QCoefficient::symbol(HSymbol::new(1, 1));
        let e = &(&x(&ctx, &[-1, 0]) - &TorusElement::monomial(&ctx, vec![-1, 1], h.clone()))
            + &TorusElement::monomial(&ctx, vec![0, 0], &QCoefficient::q_half(1) + &h);
        assert_eq!(
            e.to_string(),
            "X(-1,0) - h[1,1]*X(-1,1) + (q^(1/2) + h[1,1])*X(0,0)"
        );
        assert_eq!(TorusElement::zero(&ctx).to_string(), "0");
    }
}
