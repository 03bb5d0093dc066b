//! Exact-arithmetic workbench for Drinfeld modular forms over F_q[T].
//!
//! Everything here is exact: finite-field, polynomial, and rational-function
//! arithmetic with canonical forms, truncated u-series with precision
//! tracking, hyperderivatives, the graded algebra C[g, h] of level-one forms,
//! u-expansion and identification, reduction mod a prime 𝔭 = (π),
//! supersingular polynomials (with an independent brute-force oracle),
//! filtrations, companion-polynomial congruences, and modular Wronskians.
//!
//! Layer map (each layer only uses the ones above it):
//!
//! | module       | contents                                              |
//! |--------------|-------------------------------------------------------|
//! | [`field`]    | F_q contexts, packed elements, Lucas binomials        |
//! | [`poly`]     | A = F_q[T]: arithmetic, irreducibility, brackets, d_i |
//! | [`rat`]      | K = F_q(T) in canonical form, valuations              |
//! | [`coeff`]    | coefficient-field trait; K, A/(π), F_{q^{2d}}         |
//! | [`series`]   | truncated u-series over any coefficient field         |
//! | [`xpoly`]    | polynomials in x over any coefficient field           |
//! | [`hyperderiv`]| α-table, hyperderivatives D_n, Hasse derivative      |
//! | [`forms`]    | isobaric forms, (μ, γ), companion polynomials, dets   |
//! | [`expand`]   | Carlitz/Goss machinery, u_a, E, g, h, g_i, identify   |
//! | [`modp`]     | prime contexts, reduction, S_𝔭, filtration, checks    |
//! | [`wronskian`]| special basis, Wronskians, ε(d), theorem verifiers    |

pub mod coeff;
pub mod error;
pub mod expand;
pub mod field;
pub mod forms;
pub mod hyperderiv;
pub mod modp;
pub mod poly;
pub mod rat;
pub mod series;
pub mod wronskian;
pub mod xpoly;

pub use error::{Error, Result};
pub use field::Fq;
pub use poly::Poly;
pub use rat::Rat;
