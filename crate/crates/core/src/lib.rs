//! Exact arithmetic for generalized quantum cluster algebras.
//!
//! Coefficients live in `ℤ[h][q^{±1/2}]`, elements in a quantum torus with
//! basis `X(c)` and product `X(c)X(d) = q^{Λ(c,d)/2} X(c+d)`. Seed mutation is
//! carried out by exact right division in the initial torus, so every
//! successful mutation is a witness that the new variable is Laurent.

pub mod bounds;
pub mod coeff;
pub mod error;
pub mod explore;
pub mod matrix;
pub mod seed;
pub mod seedfile;
pub mod text;
pub mod torus;

pub use bounds::{
    coprime_check_rank2, decompose_by_direction, power_factorization_check, ub_local_member,
    ub_member, v_power, w_power, Coprimality, DirectionDecomposition, FactorizationCheck,
};
pub use coeff::{CoeffMonomial, HSymbol, QCoefficient};
pub use error::{Error, Result};
pub use explore::{
    alternating_period, bfs_explore, positivity_scan, ExplorationReport, Periodicity,
};
pub use matrix::IntMatrix;
pub use seed::{check_compatible, positive_part, CompatiblePair, ExchangeData, QuantumSeed};
pub use seedfile::{load_seed, SeedFile};
pub use text::{parse_coefficient, parse_element, ElementExpr};
pub use torus::{Exponent, TorusContext, TorusElement};
