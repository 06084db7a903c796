//! Power factorizations of mutated variables and upper-bound membership.
//!
//! Every function here works in the torus of the seed it is given, so a seed
//! reached by mutation is re-rooted first.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::coeff::QCoefficient;
use crate::error::Result;
use crate::seed::{positive_part, QuantumSeed};
use crate::torus::{Exponent, TorusElement};

/// `seed` as an initial seed of its own torus.
pub fn rooted(seed: &QuantumSeed) -> QuantumSeed {
    if seed.is_initial() {
        seed.clone()
    } else {
        seed.reroot()
    }
}

fn scaled(v: &[i64], s: i64) -> Exponent {
    v.iter().map(|x| x * s).collect()
}

fn unit(m: usize, i: usize, s: i64) -> Exponent {
    let mut e = vec![0; m];
    e[i] = s;
    e
}

/// `d̃_i / d_i`, an integer because `Λ β^i = -(d̃_i/d_i) e_i`.
fn twist_ratio(seed: &QuantumSeed, i: usize) -> i64 {
    seed.pair().dtilde()[i] / seed.exchange().degree(i)
}

fn power_product(seed: &QuantumSeed, i: usize, s: u32, sign: i64) -> TorusElement {
    let root = rooted(seed);
    let ctx = root.initial_context();
    let beta = root.beta(i);
    let ratio = twist_ratio(&root, i);
    let d = root.exchange().degree(i);
    let mut acc = TorusElement::one(ctx);
    for k in 1..=s as i64 {
        let mut factor = TorusElement::zero(ctx);
        for l in 0..=d {
            let half = sign * (2 * k - 1) * l * ratio;
            let coeff = root.exchange().family(i)[l as usize].mul_q_half(half);
            factor = &factor + &TorusElement::monomial(ctx, scaled(&beta, sign * l), coeff);
        }
        acc = &acc * &factor;
    }
    acc
}

/// `V^s_{b^i} = Π_{k=1}^{s} Σ_l q^{(2k-1) l d̃_i/(2d_i)} h_{i,l} X(lβ^i)`.
pub fn v_power(seed: &QuantumSeed, i: usize, s: u32) -> TorusElement {
    power_product(seed, i, s, 1)
}

/// `W^s_{b^i} = Π_{k=1}^{s} Σ_l q^{(1-2k) l d̃_i/(2d_i)} h_{i,l} X(-lβ^i)`.
pub fn w_power(seed: &QuantumSeed, i: usize, s: u32) -> TorusElement {
    power_product(seed, i, s, -1)
}

/// Outcome of comparing `(X'_i)^s` with its two factorizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorizationCheck {
    pub v_form: bool,
    pub w_form: bool,
}

impl FactorizationCheck {
    pub fn holds(&self) -> bool {
        self.v_form && self.w_form
    }
}

/// Compares `(X'_i)^s` against `V^s X(s[-b^i]_+ - s e_i)` and
/// `W^s X(s[b^i]_+ - s e_i)`.
pub fn power_factorization_check(
    seed: &QuantumSeed,
    i: usize,
    s: u32,
) -> Result<FactorizationCheck> {
    let root = rooted(seed);
    let ctx = root.initial_context();
    let power = root.mutated_variable(i)?.pow(s);
    let column = root.pair().column(i);
    let e_i = unit(root.m(), i, s as i64);
    let shift = |v: Vec<i64>| -> Exponent {
        scaled(&v, s as i64)
            .iter()
            .zip(&e_i)
            .map(|(a, b)| a - b)
            .collect()
    };
    let neg: Vec<i64> = column.iter().map(|x| -x).collect();
    let v_side = &v_power(&root, i, s) * &TorusElement::basis(ctx, shift(positive_part(&neg)));
    let w_side = &w_power(&root, i, s) * &TorusElement::basis(ctx, shift(positive_part(&column)));
    Ok(FactorizationCheck {
        v_form: v_side == power,
        w_form: w_side == power,
    })
}

/// `Y = Σ_j c_j X(j e_i)` with no `c_j` involving the `i`-th exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionDecomposition {
    pub direction: usize,
    pub buckets: BTreeMap<i64, TorusElement>,
}

impl DirectionDecomposition {
    pub fn reassemble(&self, like: &TorusElement) -> TorusElement {
        let ctx = like.context();
        let m = ctx.dim();
        let mut total = TorusElement::zero(ctx);
        for (&j, c) in &self.buckets {
            total = &total + &(c * &TorusElement::basis(ctx, unit(m, self.direction, j)));
        }
        total
    }
}

/// Buckets `Y` by its `i`-th exponent; a term `X(c)` with `c_i = j` contributes
/// `q^{-(1/2)Λ(c - j e_i, j e_i)} X(c - j e_i)` to bucket `j`.
pub fn decompose_by_direction(y: &TorusElement, i: usize) -> DirectionDecomposition {
    let ctx = y.context();
    let lambda = ctx.lambda();
    let m = ctx.dim();
    let mut parts: BTreeMap<i64, Vec<(Exponent, QCoefficient)>> = BTreeMap::new();
    for (c, a) in y.terms() {
        let j = c[i];
        let mut rest = c.clone();
        rest[i] = 0;
        let twist = lambda.bilinear(&rest, &unit(m, i, j));
        parts
            .entry(j)
            .or_default()
            .push((rest, a.mul_q_half(-twist)));
    }
    let buckets = parts
        .into_iter()
        .map(|(j, terms)| {
            (
                j,
                TorusElement::from_terms(ctx, terms).expect("exponents come from the same torus"),
            )
        })
        .collect();
    DirectionDecomposition {
        direction: i,
        buckets,
    }
}

/// Membership of `Y` in `ℤℙ[X_1^{±1}, ..., X_i, X'_i, ..., X_n^{±1}]`: every
/// negative bucket `c_{-j}` must be right-divisible by `V^j X(j[-b^i]_+)`.
pub fn ub_local_member(seed: &QuantumSeed, y: &TorusElement, i: usize) -> bool {
    let root = rooted(seed);
    let ctx = root.initial_context();
    let neg: Vec<i64> = root.pair().column(i).iter().map(|x| -x).collect();
    let neg = positive_part(&neg);
    decompose_by_direction(y, i)
        .buckets
        .iter()
        .filter(|(&j, _)| j < 0)
        .all(|(&j, c)| {
            let s = -j;
            let divisor = &v_power(&root, i, s as u32) * &TorusElement::basis(ctx, scaled(&neg, s));
            c.right_divide_exact(&divisor).is_ok()
        })
}

/// Per-direction verdicts of [`ub_local_member`].
pub fn ub_report(seed: &QuantumSeed, y: &TorusElement) -> Vec<bool> {
    let root = rooted(seed);
    (0..root.n())
        .into_par_iter()
        .map(|i| ub_local_member(&root, y, i))
        .collect()
}

/// Membership in the upper bound of `seed`.
pub fn ub_member(seed: &QuantumSeed, y: &TorusElement) -> bool {
    ub_report(seed, y).into_iter().all(|b| b)
}

/// Result of the coprimality search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coprimality {
    Coprime,
    CommonFactor,
    Unknown,
}

/// The exchange products `X_i X'_i` of a seed, in its own torus.
pub fn exchange_products(seed: &QuantumSeed) -> Result<Vec<TorusElement>> {
    let root = rooted(seed);
    (0..root.n()).map(|i| root.exchange_product(i)).collect()
}

/// Decides whether the two exchange products of a rank-2 seed share a
/// non-invertible central divisor.
///
/// Each exchange product is supported on a segment parallel to `β^i`. When the
/// mutable parts of `β^1` and `β^2` are linearly independent, Newton polytopes
/// of any common divisor collapse to a point, so the divisor is a unit times a
/// mutable monomial, and neither product has a non-unit content or a mutable
/// monomial factor. Otherwise a bounded candidate search is run.
pub fn coprime_check_rank2(seed: &QuantumSeed) -> Coprimality {
    if seed.n() != 2 {
        return Coprimality::Unknown;
    }
    let root = rooted(seed);
    let b1 = root.beta(0);
    let b2 = root.beta(1);
    if b1[0] * b2[1] - b1[1] * b2[0] != 0 {
        return Coprimality::Coprime;
    }
    match exchange_products(&root) {
        Ok(p) => match common_central_factor(&p[0], &p[1], 4) {
            Some(_) => Coprimality::CommonFactor,
            None => Coprimality::Unknown,
        },
        Err(_) => Coprimality::Unknown,
    }
}

fn is_central(x: &TorusElement) -> bool {
    let ctx = x.context();
    (0..ctx.dim()).all(|k| {
        let g = TorusElement::generator(ctx, k);
        &g * x == x * &g
    })
}

/// Bounded search for a central, non-monomial element right-dividing both `a`
/// and `b`. Candidates are `a`, `b` and binomials `1 ± q^{t/2} X(δ)` with `δ` a
/// difference of two support points of `a` (or its primitive part) and
/// `|t| ≤ q_bound`.
pub fn common_central_factor(
    a: &TorusElement,
    b: &TorusElement,
    q_bound: i64,
) -> Option<TorusElement> {
    let ctx = a.context();
    let mut candidates = vec![a.clone(), b.clone()];
    let support: Vec<&Exponent> = a.terms().map(|(c, _)| c).collect();
    let mut deltas = std::collections::BTreeSet::new();
    for u in &support {
        for v in &support {
            let delta: Exponent = v.iter().zip(u.iter()).map(|(x, y)| x - y).collect();
            if delta.iter().all(|&x| x == 0) {
                continue;
            }
            let g = delta.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            deltas.insert(delta.iter().map(|x| x / g).collect::<Exponent>());
            deltas.insert(delta);
        }
    }
    for delta in deltas {
        for t in -q_bound..=q_bound {
            for sign in [1i64, -1] {
                let c = QCoefficient::from_int(sign).mul_q_half(t);
                candidates
                    .push(&TorusElement::one(ctx) + &TorusElement::monomial(ctx, delta.clone(), c));
            }
        }
    }
    candidates.into_iter().find(|c| {
        c.len() > 1
            && is_central(c)
            && a.right_divide_exact(c).is_ok()
            && b.right_divide_exact(c).is_ok()
    })
}

/// Re-expresses `y` (an element of the torus of the rooted `seed`) in the torus
/// of the re-rooted seed `μ_k(seed)`. Returns `None` when `y` is not a Laurent
/// polynomial in the new cluster.
pub fn transport(seed: &QuantumSeed, k: usize, y: &TorusElement) -> Result<Option<TorusElement>> {
    let root = rooted(seed);
    let target = root.mutate(k)?.reroot();
    // The old seed seen from the new one.
    let back = target.mutate(k)?;
    let ctx = target.initial_context();
    let depth = y.terms().map(|(c, _)| (-c[k]).max(0)).max().unwrap_or(0);
    let lift = y * &TorusElement::basis(y.context(), unit(root.m(), k, depth));
    let mut image = TorusElement::zero(ctx);
    for (c, a) in lift.terms() {
        image = &image + &back.expand_current_monomial(c)?.scale(a);
    }
    let denominator = back.expand_current_monomial(&unit(root.m(), k, depth))?;
    Ok(image.right_divide_exact(&denominator).ok())
}

/// A labelled element used by the invariance test.
#[derive(Clone, Debug)]
pub struct Sample {
    pub label: String,
    pub element: TorusElement,
}

/// Cluster variables reachable by words of length at most two, frozen
/// monomials `X(±e_l)` and the inverses `X(-e_i)` of mutable variables.
pub fn invariance_samples(seed: &QuantumSeed) -> Result<Vec<Sample>> {
    let root = rooted(seed);
    let ctx = root.initial_context();
    let n = root.n();
    let m = root.m();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..n {
        words.push(vec![i]);
        for j in (0..n).filter(|&j| j != i) {
            words.push(vec![i, j]);
        }
    }
    let mut out = Vec::new();
    for word in words {
        let s = root.apply_word(&word)?;
        let label: Vec<usize> = word.iter().map(|k| k + 1).collect();
        for k in 0..n {
            let element = s.var(k).clone();
            if !out.iter().any(|x: &Sample| x.element == element) {
                out.push(Sample {
                    label: format!("variable {} after {:?}", k + 1, label),
                    element,
                });
            }
        }
    }
    for l in n..m {
        for sign in [1, -1] {
            out.push(Sample {
                label: format!("X({})", fmt_vec(&unit(m, l, sign))),
                element: TorusElement::basis(ctx, unit(m, l, sign)),
            });
        }
    }
    for i in 0..n {
        out.push(Sample {
            label: format!("X({})", fmt_vec(&unit(m, i, -1))),
            element: TorusElement::basis(ctx, unit(m, i, -1)),
        });
    }
    Ok(out)
}

fn fmt_vec(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Verdicts for one sample across one mutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceFinding {
    pub direction: usize,
    pub label: String,
    pub here: bool,
    pub there: bool,
}

impl InvarianceFinding {
    pub fn consistent(&self) -> bool {
        self.here == self.there
    }
}

/// Compares `ub_member` verdicts of every sample at `seed` and at each adjacent
/// seed after transport.
pub fn invariance_check(seed: &QuantumSeed, samples: &[Sample]) -> Result<Vec<InvarianceFinding>> {
    let root = rooted(seed);
    let mut out = Vec::new();
    for k in 0..root.n() {
        let target = root.mutate(k)?.reroot();
        let found: Result<Vec<InvarianceFinding>> = samples
            .par_iter()
            .map(|sample| {
                let here = ub_member(&root, &sample.element);
                let there = match transport(&root, k, &sample.element)? {
                    Some(image) => ub_member(&target, &image),
                    None => false,
                };
                Ok(InvarianceFinding {
                    direction: k,
                    label: sample.label.clone(),
                    here,
                    there,
                })
            })
            .collect();
        out.extend(found?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;
    use crate::seed::fixtures::{a2, frozen, g2};
    use crate::text::parse_element;
    use crate::torus::TorusContext;

    #[test]
    fn v_and_w_examples() {
        let seed = g2();
        let ctx = seed.initial_context();
        assert_eq!(v_power(&seed, 0, 0), TorusElement::one(ctx));
        assert_eq!(w_power(&seed, 1, 0), TorusElement::one(ctx));
        assert_eq!(
            v_power(&seed, 1, 1),
            parse_element("1+q^(1/2)*X(1,0)", ctx).unwrap()
        );
        assert_eq!(
            v_power(&seed, 0, 1),
            parse_element(
                "1+q^(1/2)*h[1,1]*X(0,-1)+q*h[1,1]*X(0,-2)+q^(3/2)*X(0,-3)",
                ctx
            )
            .unwrap()
        );
    }

    #[test]
    fn factorizations_hold() {
        for (seed, i, s) in [
            (g2(), 0, 1),
            (g2(), 1, 3),
            (a2(), 0, 2),
            (frozen(), 0, 2),
            (frozen(), 1, 3),
        ] {
            let check = power_factorization_check(&seed, i, s).unwrap();
            assert!(check.holds(), "{check:?}");
        }
    }

    #[test]
    fn factorizations_hold_at_mutated_seeds() {
        let seed = g2().apply_word(&[0, 1, 0]).unwrap();
        for i in 0..2 {
            for s in 1..=3 {
                assert!(power_factorization_check(&seed, i, s).unwrap().holds());
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let seed = g2();
        let ctx = seed.initial_context();
        let d = decompose_by_direction(&TorusElement::generator(ctx, 0), 0);
        assert_eq!(d.buckets.len(), 1);
        assert_eq!(d.buckets[&1], TorusElement::one(ctx));
        let d = decompose_by_direction(&TorusElement::generator(ctx, 1), 0);
        assert_eq!(d.buckets[&0], TorusElement::generator(ctx, 1));
        let x3 = seed.mutate(0).unwrap().var(0).clone();
        let d = decompose_by_direction(&x3, 0);
        assert_eq!(d.buckets.keys().copied().collect::<Vec<_>>(), vec![-1]);
        assert_eq!(d.reassemble(&x3), x3);
    }

    #[test]
    fn local_membership_examples() {
        let seed = g2();
        let ctx = seed.initial_context();
        for i in 0..2 {
            let mutated = seed.mutated_variable(i).unwrap();
            assert!(ub_local_member(&seed, &mutated, i));
            assert!(ub_member(&seed, &mutated));
            assert!(!ub_local_member(
                &seed,
                &TorusElement::basis(ctx, unit(2, i, -1)),
                i
            ));
            assert!(ub_local_member(&seed, &TorusElement::generator(ctx, i), i));
        }
    }

    #[test]
    fn frozen_monomials_are_members() {
        let seed = frozen();
        let ctx = seed.initial_context();
        for sign in [1, -1] {
            assert!(ub_member(
                &seed,
                &TorusElement::basis(ctx, vec![0, 0, sign])
            ));
        }
        assert!(!ub_member(&seed, &TorusElement::basis(ctx, vec![-1, 0, 0])));
    }

    #[test]
    fn coprimality_examples() {
        assert_eq!(coprime_check_rank2(&g2()), Coprimality::Coprime);
        assert_eq!(coprime_check_rank2(&a2()), Coprimality::Coprime);
        assert_eq!(coprime_check_rank2(&frozen()), Coprimality::Coprime);
    }

    #[test]
    fn rank_three_is_unknown() {
        // Type A3 with one frozen row.
        let btilde =
            IntMatrix::from_rows(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0], vec![0, 0, 1]])
                .unwrap();
        let lambda = compatible_lambda(&btilde);
        let pair = crate::seed::CompatiblePair::new(lambda, btilde.clone()).unwrap();
        let seed = QuantumSeed::new(
            pair,
            crate::seed::ExchangeData::with_defaults(&btilde).unwrap(),
        )
        .unwrap();
        assert_eq!(coprime_check_rank2(&seed), Coprimality::Unknown);
    }

    /// Brute-force search for a skew-symmetric Λ with small entries compatible with `btilde`.
    fn compatible_lambda(btilde: &IntMatrix) -> IntMatrix {
        let m = btilde.rows();
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .collect();
        let range = [-2i64, -1, 0, 1, 2];
        let total = range.len().pow(pairs.len() as u32);
        for code in 0..total {
            let mut lambda = IntMatrix::zeros(m, m);
            let mut c = code;
            for &(i, j) in &pairs {
                let v = range[c % range.len()];
                c /= range.len();
                lambda[(i, j)] = v;
                lambda[(j, i)] = -v;
            }
            if crate::seed::check_compatible(&lambda, btilde).is_ok() {
                return lambda;
            }
        }
        panic!("no compatible Λ found");
    }

    #[test]
    fn common_factor_found_in_degenerate_torus() {
        let ctx = TorusContext::new(IntMatrix::zeros(2, 2)).unwrap();
        let a = parse_element("(1+X(1,0))*(1+X(0,1))", &ctx).unwrap();
        let b = parse_element("(1+X(1,0))*(1-X(0,1))", &ctx).unwrap();
        let factor = common_central_factor(&a, &b, 2).unwrap();
        let expected = parse_element("1+X(1,0)", &ctx).unwrap();
        // Equal up to a unit.
        assert!(factor
            .right_divide_exact(&expected)
            .unwrap()
            .as_monomial()
            .is_some());
        let c = parse_element("1+X(0,1)", &ctx).unwrap();
        let d = parse_element("1-X(0,1)", &ctx).unwrap();
        assert!(common_central_factor(&c, &d, 2).is_none());
    }

    #[test]
    fn transport_of_initial_variables() {
        let seed = g2();
        let ctx = seed.initial_context();
        let target = seed.mutate(0).unwrap().reroot();
        // X_2 is shared by both clusters.
        let x2 = transport(&seed, 0, &TorusElement::generator(ctx, 1))
            .unwrap()
            .unwrap();
        assert_eq!(x2, TorusElement::generator(target.initial_context(), 1));
        // X_1 becomes the mutated variable of the new seed.
        let x1 = transport(&seed, 0, &TorusElement::generator(ctx, 0))
            .unwrap()
            .unwrap();
        assert_eq!(x1, target.mutated_variable(0).unwrap());
        // X_3 = μ_1(X_1) is the new generator.
        let x3 = seed.mutated_variable(0).unwrap();
        let image = transport(&seed, 0, &x3).unwrap().unwrap();
        assert_eq!(image, TorusElement::generator(target.initial_context(), 0));
        // X(-1,0) stays Laurent: it is the inverse of a cluster variable.
        assert!(transport(&seed, 1, &TorusElement::basis(ctx, vec![-1, 0]))
            .unwrap()
            .is_some());
    }

    #[test]
    fn invariance_on_rank_two_examples() {
        for seed in [g2(), a2()] {
            let samples = invariance_samples(&seed).unwrap();
            let findings = invariance_check(&seed, &samples).unwrap();
            assert!(!findings.is_empty());
            for f in &findings {
                assert!(f.consistent(), "{f:?}");
            }
        }
    }
}
