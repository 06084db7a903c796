//! Compatible pairs, exchange data and quantum seeds.
//!
//! Directions are 0-based throughout the library; error values and text
//! output use 1-based directions.

use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_integer::Integer;

use crate::coeff::{HSymbol, QCoefficient};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::torus::{Exponent, TorusContext, TorusElement};

/// Entrywise `max(x, 0)`.
pub fn positive_part(v: &[i64]) -> Vec<i64> {
    v.iter().map(|&x| x.max(0)).collect()
}

fn negated(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

/// Checks that `(lambda, btilde)` is a compatible pair and returns the diagonal
/// `(d̃_1, ..., d̃_n)` of `D` in `Λ B̃ = -[D; 0]`.
///
/// Also verifies that `B̃` has full rank and that `D B` is skew-symmetric.
pub fn check_compatible(lambda: &IntMatrix, btilde: &IntMatrix) -> Result<Vec<i64>> {
    let m = lambda.rows();
    let n = btilde.cols();
    if lambda.cols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: lambda.cols(),
        });
    }
    if btilde.rows() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: btilde.rows(),
        });
    }
    if n == 0 || n > m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: n,
        });
    }
    if let Some((row, col)) = lambda.skew_violation() {
        return Err(Error::NotSkewSymmetric { row, col });
    }
    let product = lambda.mul(btilde)?;
    let mut dtilde = Vec::with_capacity(n);
    for row in 0..m {
        for col in 0..n {
            let value = product[(row, col)];
            let ok = if row == col { value < 0 } else { value == 0 };
            if !ok {
                return Err(Error::NotCompatible { row, col, value });
            }
        }
    }
    for k in 0..n {
        dtilde.push(-product[(k, k)]);
    }
    if btilde.rank() < n {
        return Err(Error::RankDeficient);
    }
    for i in 0..n {
        for j in i..n {
            if dtilde[i] * btilde[(i, j)] != -dtilde[j] * btilde[(j, i)] {
                return Err(Error::NotSkewSymmetrizable { row: i, col: j });
            }
        }
    }
    Ok(dtilde)
}

/// The `m×m` matrix `E_ε` for mutation in direction `i`.
pub fn e_matrix(btilde: &IntMatrix, i: usize, eps: i64) -> IntMatrix {
    let m = btilde.rows();
    let mut e = IntMatrix::identity(m);
    for k in 0..m {
        e[(k, i)] = if k == i {
            -1
        } else {
            (-eps * btilde[(k, i)]).max(0)
        };
    }
    e
}

/// The `n×n` matrix `F_ε` for mutation in direction `i`.
pub fn f_matrix(btilde: &IntMatrix, i: usize, eps: i64) -> IntMatrix {
    let n = btilde.cols();
    let mut f = IntMatrix::identity(n);
    for l in 0..n {
        f[(i, l)] = if l == i {
            -1
        } else {
            (eps * btilde[(i, l)]).max(0)
        };
    }
    f
}

/// A validated compatible pair `(Λ, B̃)` with its skew-symmetrizer diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompatiblePair {
    lambda: IntMatrix,
    btilde: IntMatrix,
    dtilde: Vec<i64>,
}

impl CompatiblePair {
    pub fn new(lambda: IntMatrix, btilde: IntMatrix) -> Result<Self> {
        let dtilde = check_compatible(&lambda, &btilde)?;
        Ok(CompatiblePair {
            lambda,
            btilde,
            dtilde,
        })
    }

    pub fn m(&self) -> usize {
        self.btilde.rows()
    }

    pub fn n(&self) -> usize {
        self.btilde.cols()
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    pub fn btilde(&self) -> &IntMatrix {
        &self.btilde
    }

    pub fn dtilde(&self) -> &[i64] {
        &self.dtilde
    }

    /// The column `b^k`.
    pub fn column(&self, k: usize) -> Vec<i64> {
        self.btilde.column(k)
    }

    pub(crate) fn check_direction(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::InvalidDirection {
                direction: i + 1,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// `(E_ε B̃ F_ε, E_ε^T Λ E_ε)` for one sign.
    pub fn mutate_with_sign(&self, i: usize, eps: i64) -> Result<(IntMatrix, IntMatrix)> {
        self.check_direction(i)?;
        let e = e_matrix(&self.btilde, i, eps);
        let f = f_matrix(&self.btilde, i, eps);
        let btilde = e.mul(&self.btilde)?.mul(&f)?;
        let lambda = e.transpose().mul(&self.lambda)?.mul(&e)?;
        Ok((btilde, lambda))
    }

    /// Mutation in direction `i`. Both signs are computed and must agree; the
    /// result is re-validated as a compatible pair.
    pub fn mutate(&self, i: usize) -> Result<CompatiblePair> {
        let plus = self.mutate_with_sign(i, 1)?;
        let minus = self.mutate_with_sign(i, -1)?;
        if plus != minus {
            return Err(Error::EpsilonMismatch { direction: i + 1 });
        }
        let (btilde, lambda) = plus;
        CompatiblePair::new(lambda, btilde)
    }
}

/// Exchange degrees `d_k` and coefficient families `h_{k,0..d_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeData {
    d: Vec<i64>,
    h: Vec<Vec<QCoefficient>>,
}

impl ExchangeData {
    /// Validates the data against the columns of `btilde`.
    pub fn new(d: Vec<i64>, h: Vec<Vec<QCoefficient>>, btilde: &IntMatrix) -> Result<Self> {
        let n = btilde.cols();
        if d.len() != n || h.len() != n {
            return Err(Error::InvalidExchangeData(format!(
                "expected {n} degrees and {n} coefficient families, found {} and {}",
                d.len(),
                h.len()
            )));
        }
        for k in 0..n {
            let dk = d[k];
            if dk <= 0 {
                return Err(Error::InvalidExchangeData(format!(
                    "d_{} = {dk} is not positive",
                    k + 1
                )));
            }
            if let Some(l) = (0..btilde.rows()).find(|&l| btilde[(l, k)] % dk != 0) {
                return Err(Error::InvalidExchangeData(format!(
                    "d_{} = {dk} does not divide b_{},{} = {}",
                    k + 1,
                    l + 1,
                    k + 1,
                    btilde[(l, k)]
                )));
            }
            let family = &h[k];
            if family.len() != dk as usize + 1 {
                return Err(Error::InvalidExchangeData(format!(
                    "h_{} has {} entries, expected {}",
                    k + 1,
                    family.len(),
                    dk + 1
                )));
            }
            if !family[0].is_one() || !family[dk as usize].is_one() {
                return Err(Error::InvalidExchangeData(format!(
                    "h_{},0 and h_{},{dk} must both be 1",
                    k + 1,
                    k + 1
                )));
            }
            for r in 0..=dk as usize {
                if family[r] != family[dk as usize - r] {
                    return Err(Error::InvalidExchangeData(format!(
                        "h_{} is not palindromic at position {r}",
                        k + 1
                    )));
                }
            }
        }
        Ok(ExchangeData { d, h })
    }

    /// `d_k` = gcd of the entries of column `k`.
    pub fn default_degrees(btilde: &IntMatrix) -> Vec<i64> {
        (0..btilde.cols())
            .map(|k| {
                btilde
                    .column(k)
                    .into_iter()
                    .fold(0i64, |g, x| g.gcd(&x))
                    .max(1)
            })
            .collect()
    }

    /// `[1, h[k,1], h[k,2], ..., h[k,1], 1]`: one formal symbol per palindromic class.
    /// `k` is 0-based.
    pub fn default_family(k: usize, d: i64) -> Vec<QCoefficient> {
        (0..=d)
            .map(|r| {
                let class = r.min(d - r);
                if class == 0 {
                    QCoefficient::one()
                } else {
                    QCoefficient::symbol(HSymbol::new(k as u32 + 1, class as u32))
                }
            })
            .collect()
    }

    pub fn with_defaults(btilde: &IntMatrix) -> Result<Self> {
        let d = Self::default_degrees(btilde);
        let h = d
            .iter()
            .enumerate()
            .map(|(k, &dk)| Self::default_family(k, dk))
            .collect();
        Self::new(d, h, btilde)
    }

    pub fn degrees(&self) -> &[i64] {
        &self.d
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.d[k]
    }

    pub fn family(&self, k: usize) -> &[QCoefficient] {
        &self.h[k]
    }

    /// `β^k = b^k / d_k` for the given column.
    pub fn beta(&self, column: &[i64], k: usize) -> Vec<i64> {
        column.iter().map(|x| x / self.d[k]).collect()
    }
}

/// A quantum seed: the current compatible pair together with the expansions of
/// the current extended cluster in the torus of the initial seed.
#[derive(Clone, Debug)]
pub struct QuantumSeed {
    pair: CompatiblePair,
    exchange: Arc<ExchangeData>,
    initial: Arc<TorusContext>,
    vars: Vec<TorusElement>,
    history: Vec<usize>,
}

impl QuantumSeed {
    /// The initial seed `(X, h, Λ, B̃)` with `X_k = X(e_k)`.
    pub fn new(pair: CompatiblePair, exchange: ExchangeData) -> Result<Self> {
        let exchange = ExchangeData::new(exchange.d, exchange.h, pair.btilde())?;
        let initial = TorusContext::new(pair.lambda().clone())?;
        let vars = (0..pair.m())
            .map(|k| TorusElement::generator(&initial, k))
            .collect();
        Ok(QuantumSeed {
            pair,
            exchange: Arc::new(exchange),
            initial,
            vars,
            history: Vec::new(),
        })
    }

    pub fn pair(&self) -> &CompatiblePair {
        &self.pair
    }

    pub fn exchange(&self) -> &ExchangeData {
        &self.exchange
    }

    pub fn initial_context(&self) -> &Arc<TorusContext> {
        &self.initial
    }

    pub fn vars(&self) -> &[TorusElement] {
        &self.vars
    }

    pub fn var(&self, k: usize) -> &TorusElement {
        &self.vars[k]
    }

    /// Mutation directions applied since the initial seed (0-based).
    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn m(&self) -> usize {
        self.pair.m()
    }

    pub fn n(&self) -> usize {
        self.pair.n()
    }

    pub fn is_initial(&self) -> bool {
        self.history.is_empty()
    }

    /// A fresh initial seed built from the current `(Λ_t, B̃_t, h, d)`.
    pub fn reroot(&self) -> QuantumSeed {
        QuantumSeed::new(self.pair.clone(), (*self.exchange).clone())
            .expect("current data of a valid seed is a valid initial seed")
    }

    /// `β^i_t` of the current exchange matrix.
    pub fn beta(&self, i: usize) -> Vec<i64> {
        self.exchange.beta(&self.pair.column(i), i)
    }

    /// The current-cluster monomial `X^{(t)}(v)` expanded in the initial torus:
    /// `q^{(1/2)Σ_{l<k} v_l v_k λ_{t,kl}} · vars[1]^{v_1} ··· vars[m]^{v_m}`.
    pub fn expand_current_monomial(&self, v: &[i64]) -> Result<TorusElement> {
        if v.len() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                found: v.len(),
            });
        }
        let lambda = self.pair.lambda();
        let mut pref = 0;
        for k in 0..v.len() {
            for l in 0..k {
                pref += v[l] * v[k] * lambda[(k, l)];
            }
        }
        let mut acc = TorusElement::constant(&self.initial, QCoefficient::q_half(pref));
        for (k, &e) in v.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let factor = if e > 0 {
                self.vars[k].pow(e as u32)
            } else {
                self.vars[k]
                    .monomial_inverse()
                    .ok_or(Error::NegativeMutableExponent {
                        index: k + 1,
                        exponent: e,
                    })?
                    .pow(e.unsigned_abs() as u32)
            };
            acc = &acc * &factor;
        }
        Ok(acc)
    }

    /// The exchange exponents `c_r = r[β^i]_+ + (d_i - r)[-β^i]_+ - e_i` paired
    /// with `h_{i,r}`, for `r = 0..=d_i`.
    pub fn exchange_terms(&self, i: usize) -> Vec<(QCoefficient, Exponent)> {
        let beta = self.beta(i);
        let pos = positive_part(&beta);
        let neg = positive_part(&negated(&beta));
        let d = self.exchange.degree(i);
        (0..=d)
            .map(|r| {
                let mut c: Exponent = pos
                    .iter()
                    .zip(&neg)
                    .map(|(p, n)| r * p + (d - r) * n)
                    .collect();
                c[i] -= 1;
                (self.exchange.family(i)[r as usize].clone(), c)
            })
            .collect()
    }

    /// `T = Σ_r h_{i,r} q^{-(1/2)Λ_t(c_r + e_i, -e_i)} X^{(t)}(c_r + e_i)`, so that
    /// the mutated variable is `T · vars[i]^{-1}`.
    pub fn exchange_numerator(&self, i: usize) -> Result<TorusElement> {
        self.pair.check_direction(i)?;
        let mut e_i = vec![0; self.m()];
        e_i[i] = 1;
        let mut total = TorusElement::zero(&self.initial);
        for (h, mut c) in self.exchange_terms(i) {
            c[i] += 1;
            let twist = self.pair.lambda().bilinear(&c, &e_i);
            let mono = self.expand_current_monomial(&c)?;
            total = &total + &mono.scale(&h.mul_q_half(twist));
        }
        Ok(total)
    }

    /// `vars[i] · vars'[i]` as the exchange polynomial
    /// `Σ_r h_{i,r} q^{(1/2)Λ_t(e_i, c_r)} X^{(t)}(c_r + e_i)`.
    pub fn exchange_product(&self, i: usize) -> Result<TorusElement> {
        self.pair.check_direction(i)?;
        let mut e_i = vec![0; self.m()];
        e_i[i] = 1;
        let mut total = TorusElement::zero(&self.initial);
        for (h, c) in self.exchange_terms(i) {
            let twist = self.pair.lambda().bilinear(&e_i, &c);
            let mut v = c;
            v[i] += 1;
            let mono = self.expand_current_monomial(&v)?;
            total = &total + &mono.scale(&h.mul_q_half(twist));
        }
        Ok(total)
    }

    /// The new variable `μ_i(X_i)` expanded in the initial torus.
    pub fn mutated_variable(&self, i: usize) -> Result<TorusElement> {
        let numerator = self.exchange_numerator(i)?;
        numerator
            .right_divide_exact(&self.vars[i])
            .map_err(|_| Error::LaurentViolation {
                direction: i + 1,
                word: self.history.iter().map(|k| k + 1).collect(),
            })
    }

    /// Seed mutation in direction `i`.
    pub fn mutate(&self, i: usize) -> Result<QuantumSeed> {
        let pair = self.pair.mutate(i)?;
        let new_var = self.mutated_variable(i)?;
        let mut vars = self.vars.clone();
        vars[i] = new_var;
        let mut history = self.history.clone();
        history.push(i);
        Ok(QuantumSeed {
            pair,
            exchange: Arc::clone(&self.exchange),
            initial: Arc::clone(&self.initial),
            vars,
            history,
        })
    }

    /// Applies the word left to right.
    pub fn apply_word(&self, word: &[usize]) -> Result<QuantumSeed> {
        let mut seed = self.clone();
        for &i in word {
            seed = seed.mutate(i)?;
        }
        Ok(seed)
    }

    /// Strict equality of `Λ_t`, `B̃_t` and all expansions.
    pub fn seed_equal(&self, other: &QuantumSeed) -> bool {
        self == other
    }

    /// Checks the structural invariants of this seed and returns a description of
    /// every violation found (empty when all hold).
    pub fn check_invariants(&self) -> Vec<String> {
        let mut findings = Vec::new();
        let word: Vec<usize> = self.history.iter().map(|k| k + 1).collect();
        if let Err(e) = check_compatible(self.pair.lambda(), self.pair.btilde()) {
            findings.push(format!("{word:?}: compatibility lost: {e}"));
        }
        for l in self.n()..self.m() {
            if self.vars[l] != TorusElement::generator(&self.initial, l) {
                findings.push(format!("{word:?}: frozen variable {} changed", l + 1));
            }
        }
        for k in 0..self.m() {
            for l in k + 1..self.m() {
                let expected = self.pair.lambda()[(k, l)];
                match self.vars[k].q_commutation_exponent(&self.vars[l]) {
                    Ok(Some(t)) if t == expected => {}
                    other => findings.push(format!(
                        "{word:?}: vars {} and {} commute with {other:?}, expected q^{expected}",
                        k + 1,
                        l + 1
                    )),
                }
            }
        }
        for i in 0..self.n() {
            match self.pair.mutate(i).and_then(|p| p.mutate(i)) {
                Ok(p) if p == self.pair => {}
                Ok(_) => findings.push(format!(
                    "{word:?}: pair mutation {} is not an involution",
                    i + 1
                )),
                Err(e) => findings.push(format!("{word:?}: pair mutation {}: {e}", i + 1)),
            }
            let once = match self.mutate(i) {
                Ok(s) => s,
                Err(e) => {
                    findings.push(format!("{word:?}: {e}"));
                    continue;
                }
            };
            match once.mutate(i) {
                Ok(twice) if twice == *self => {}
                Ok(_) => findings.push(format!(
                    "{word:?}: seed mutation {} is not an involution",
                    i + 1
                )),
                Err(e) => findings.push(format!("{word:?}: {e}")),
            }
            match self.exchange_product(i) {
                Ok(p) if p == &self.vars[i] * &once.vars[i] => {}
                Ok(_) => findings.push(format!("{word:?}: exchange relation {} fails", i + 1)),
                Err(e) => findings.push(format!("{word:?}: {e}")),
            }
        }
        findings
    }
}

impl PartialEq for QuantumSeed {
    fn eq(&self, other: &Self) -> bool {
        self.pair.lambda == other.pair.lambda
            && self.pair.btilde == other.pair.btilde
            && self.vars == other.vars
    }
}

impl Eq for QuantumSeed {}

impl Hash for QuantumSeed {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.pair.lambda.hash(state);
        self.pair.btilde.hash(state);
        self.vars.hash(state);
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn matrix(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    pub fn g2() -> QuantumSeed {
        let btilde = matrix(&[&[0, 1], &[-3, 0]]);
        let pair = CompatiblePair::new(matrix(&[&[0, 1], &[-1, 0]]), btilde.clone()).unwrap();
        QuantumSeed::new(pair, ExchangeData::with_defaults(&btilde).unwrap()).unwrap()
    }

    pub fn a2() -> QuantumSeed {
        let btilde = matrix(&[&[0, 1], &[-1, 0]]);
        let pair = CompatiblePair::new(matrix(&[&[0, 1], &[-1, 0]]), btilde.clone()).unwrap();
        QuantumSeed::new(pair, ExchangeData::with_defaults(&btilde).unwrap()).unwrap()
    }

    pub fn frozen() -> QuantumSeed {
        let btilde = matrix(&[&[0, 1], &[-2, 0], &[2, -1]]);
        let lambda = matrix(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]);
        let pair = CompatiblePair::new(lambda, btilde.clone()).unwrap();
        QuantumSeed::new(pair, ExchangeData::with_defaults(&btilde).unwrap()).unwrap()
    }
}
