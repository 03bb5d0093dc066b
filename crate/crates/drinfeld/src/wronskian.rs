//! Wronskians of Drinfeld modular forms, the special weight-(q³+1) basis,
//! and end-to-end verification routines.
//!
//! Two determinants are computed side by side:
//!
//! * [`wronskian_series`] — the analytic Wronskian `det(D_m(f_i))` of
//!   u-series, where `D_m` is the m-th hyperderivative (row i, column m,
//!   m = 0…n−1);
//! * [`wronskian_serre`] — the symbolic Wronskian `det(∂_m(f_i))` built
//!   from iterated Serre operators inside the ring F_q(T)[g, h].
//!
//! For n ≤ q the two agree after expansion: the E-correction terms in
//! ∂ = D₁ − k·E cancel in the determinant, column by column.  That identity
//! is what [`verify_theorem_computation`] checks on the special basis
//!
//!     f_n = g^{n(q+1)} · h^{q²−q+1−n(q−1)},   0 ≤ n ≤ q−1,
//!
//! of double-cuspidal forms of weight q³+1 and type 1: their symbolic
//! Wronskian collapses to a single monomial ±g^{q²(q−1)/2}·h^{q²(q+1)/2}
//! (for prime q), so the series Wronskian has exact u-order q²(q+1)/2.
//! [`verify_theorem_ahlgrenono`] then squares that monomial and checks the
//! supersingular factorization of its companion polynomial mod a cubic
//! prime.

use std::time::Instant;

use serde::Serialize;

use crate::coeff::{CoeffField, KField};
use crate::error::{Error, Result};
use crate::expand::Expander;
use crate::field::Fq;
use crate::forms::{
    companion, double_cusp_basis, monomial_basis, mu_gamma, serre_del_n, Form,
};
use crate::hyperderiv::{hyperderivative, AlphaTable};
use crate::modp::PrimeContext;
use crate::rat::Rat;
use crate::series::KSeries;
use crate::xpoly::XPoly;

// ---------------------------------------------------------------------------
// Genus and the special basis
// ---------------------------------------------------------------------------

/// Genus of the Drinfeld modular curve attached to a prime of degree d:
///
///     g = (q^d − q)/(q² − 1)    for d odd,
///     g = (q^d − q²)/(q² − 1)   for d even.
///
/// The count of supersingular j-invariants at such a prime is g + 1.
/// Pre: d ≥ 1.
pub fn genus(q: u64, d: u32) -> i64 {
    assert!(d >= 1, "genus is defined for prime degree d >= 1");
    let qd = (q as i64).pow(d);
    let num = if d % 2 == 1 { qd - q as i64 } else { qd - (q * q) as i64 };
    let den = (q * q - 1) as i64;
    debug_assert!(num % den == 0, "genus formula must divide exactly");
    num / den
}

/// The special basis of the double-cuspidal forms of weight q³+1 and
/// type 1: the q monomials g^{n(q+1)}·h^{q²−q+1−n(q−1)} for 0 ≤ n ≤ q−1,
/// listed with n increasing (so h-degree decreasing).
pub fn special_basis(fq: &Fq) -> Vec<Form> {
    let q = fq.q() as i64;
    (0..q)
        .map(|n| {
            let a = n * (q + 1);
            let b = q * q - q + 1 - n * (q - 1);
            Form::monomial(fq, a, b, Rat::from_int(fq, 1))
                .expect("special-basis exponents are nonnegative")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// The two Wronskians
// ---------------------------------------------------------------------------

/// Wronskian of u-series: det of the n×n matrix with (i, m) entry
/// `D_m(f_i)`, m = 0…n−1, computed by exact Gaussian elimination over
/// K-coefficient series.  Pivots are chosen with minimal u-order so that
/// every quotient entry/pivot is an exact series division; precision decays
/// accordingly and the result carries whatever window survives.
///
/// Pre: `fs` nonempty; every input series should hold comfortably more
/// precision than the u-order of the answer (each elimination stage spends
/// pivot-order many coefficients).  Errors: empty input
/// (`InvalidArgument`), or a window too short to finish a division
/// (`PrecisionExhausted`).  If an entire pivot column vanishes through the
/// visible window the determinant is zero through that window and a zero
/// series of the surviving precision is returned.
pub fn wronskian_series(at: &AlphaTable, fs: &[KSeries]) -> Result<KSeries> {
    if fs.is_empty() {
        return Err(Error::InvalidArgument("wronskian of an empty list".into()));
    }
    let kf = KField { fq: at.fq().clone() };
    let n = fs.len();
    let mut m: Vec<Vec<KSeries>> = fs
        .iter()
        .map(|f| (0..n as u64).map(|d| hyperderivative(at, f, d)).collect())
        .collect();

    let mut negate = false;
    for col in 0..n {
        // Minimal-order pivot among the remaining rows.
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in m.iter().enumerate().take(n).skip(col) {
            if let Some(o) = row[col].ord(&kf) {
                if best.map_or(true, |(_, bo)| o < bo) {
                    best = Some((r, o));
                }
            }
        }
        let Some((r, _)) = best else {
            // The whole column vanishes through its window: so does det.
            let prec = m
                .iter()
                .skip(col)
                .map(|row| row[col].prec())
                .min()
                .expect("nonempty remaining block");
            return Ok(KSeries::zero(&kf, prec));
        };
        if r != col {
            m.swap(r, col);
            negate = !negate;
        }
        let pivot = m[col][col].clone();
        let pivot_row = m[col].clone();
        for row in m.iter_mut().take(n).skip(col + 1) {
            if row[col].is_zero(&kf) && row[col].ord(&kf).is_none() {
                continue;
            }
            let factor = row[col].div_exact(&kf, &pivot)?;
            for (c, entry) in row.iter_mut().enumerate().skip(col) {
                *entry = entry.sub(&kf, &factor.mul(&kf, &pivot_row[c]));
            }
        }
    }

    let mut det = m[0][0].clone();
    for (i, row) in m.iter().enumerate().take(n).skip(1) {
        det = det.mul(&kf, &row[i]);
    }
    if negate {
        det = det.neg(&kf);
    }
    Ok(det)
}

/// Symbolic Wronskian: det of the n×n matrix with (i, m) entry `∂_m(f_i)`
/// built from iterated Serre operators, evaluated inside F_q(T)[g, h].
///
/// Pre: `fs` nonempty, of length ≤ q (the iterated Serre operator ∂_m is
/// only defined for m < q), all sharing one weight and type.  Errors: empty
/// input (`InvalidArgument`), list longer than q (`SerreOrderTooLarge`),
/// mixed grades (`InhomogeneousDeterminant`).  A single form is its own
/// Wronskian.
pub fn wronskian_serre(fq: &Fq, fs: &[Form]) -> Result<Form> {
    if fs.is_empty() {
        return Err(Error::InvalidArgument("wronskian of an empty list".into()));
    }
    if fs.len() as u64 > fq.q() {
        return Err(Error::SerreOrderTooLarge { n: fs.len() as u64 - 1, q: fq.q() });
    }
    let n = fs.len() as u64;
    let mut rows = Vec::with_capacity(fs.len());
    for f in fs {
        let mut row = Vec::with_capacity(fs.len());
        for d in 0..n {
            row.push(serre_del_n(fq, f, d)?);
        }
        rows.push(row);
    }
    crate::forms::det_isobaric(fq, &rows)
}

// ---------------------------------------------------------------------------
// Exponents attached to the degree-d Eisenstein congruence
// ---------------------------------------------------------------------------

/// The correction exponent ε(q, d) for the Wronskian square of weight
/// (q^d+1)·g(g+1) and type g(g+1), where g = genus(q, d):
///
///     ε = γ((q^d+1)·g(g+1), g(g+1)) / (q+1)              for d odd,
///     ε = (q·g(g+1) − γ((q^d+1)·g(g+1), g(g+1))) / (q+1)  for d even.
///
/// Pre: d ≥ 3.  Errors: `InvalidArgument` for d < 3,
/// `InternalInconsistency` if the division is not exact.
pub fn epsilon(fq: &Fq, d: u32) -> Result<i64> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!(
            "epsilon is defined for degree d >= 3, got {d}"
        )));
    }
    let q = fq.q() as i64;
    let g = genus(fq.q(), d);
    let gg = g * (g + 1);
    let k = ((q).pow(d) + 1) * gg;
    let (_, gamma) = mu_gamma(fq, k, gg)?;
    let num = if d % 2 == 1 { gamma } else { q * gg - gamma };
    if num % (q + 1) != 0 {
        return Err(Error::InternalInconsistency(format!(
            "epsilon numerator {num} not divisible by q+1 = {}",
            q + 1
        )));
    }
    Ok(num / (q + 1))
}

/// The x-power shift a(q, d) in the supersingular divisibility satisfied by
/// the Wronskian square:
///
///     a = ⌊( g(g−1)·γ(q^d−1, 0)·q + γ((q^d+1)·g(g+1), g(g+1)) ) / (q+1)⌋,
///
/// with g = genus(q, d).  Pre: d ≥ 3 (`InvalidArgument` otherwise).
pub fn exponent_a(fq: &Fq, d: u32) -> Result<i64> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!(
            "exponent_a is defined for degree d >= 3, got {d}"
        )));
    }
    let q = fq.q() as i64;
    let g = genus(fq.q(), d);
    let gg = g * (g + 1);
    let (_, gamma0) = mu_gamma(fq, q.pow(d) - 1, 0)?;
    let (_, gamma) = mu_gamma(fq, (q.pow(d) + 1) * gg, gg)?;
    Ok((g * (g - 1) * gamma0 * q + gamma).div_euclid(q + 1))
}

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

/// One named pass/fail check with a human-readable witness string.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

/// The outcome of an end-to-end verification run: which statement was
/// checked, in which arithmetic context, and how each named sub-check
/// fared.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    /// Which verification ran (e.g. "wronskian-computation").
    pub statement: String,
    pub q: u64,
    /// The prime π when the statement is 𝔭-local; None when global.
    pub pi: Option<String>,
    /// Series precision used.
    pub prec: usize,
    pub elapsed_ms: u128,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// True iff every sub-check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, passed: bool, witness: String) -> CheckResult {
    CheckResult { name: name.into(), passed, witness }
}

/// Verify, over F_q with q = p prime, the closed form of the Wronskian of
/// the special weight-(q³+1) basis:
///
/// 1. the special basis is exactly the double-cuspidal monomial slice of
///    M_{q³+1, 1}, of size g = genus(q, 3), inside the full monomial basis
///    of size g+1;
/// 2. its symbolic Wronskian is a single monomial
///    σ·g^{q²(q−1)/2}·h^{q²(q+1)/2} with σ ∈ {±1} (σ is recorded, not
///    prescribed);
/// 3. the analytic Wronskian of the expanded basis equals the expansion of
///    that monomial exactly through the surviving window;
/// 4. its u-order is exactly q²(q+1)/2.
///
/// The statement is prime-independent; the report carries `pi: None`.
/// Pre: q prime; precision comfortably above q²(q+1)/2 (at least +40).
pub fn verify_theorem_computation(ex: &Expander) -> Result<VerifyReport> {
    let fq = ex.fq();
    if fq.e() != 1 {
        return Err(Error::InvalidArgument(format!(
            "special-basis Wronskian verification needs prime q, got q = {}",
            fq.q()
        )));
    }
    let p = fq.p() as i64;
    let order = (p * p * (p + 1) / 2) as usize;
    let needed = order + 40;
    if ex.prec() < needed {
        return Err(Error::PrecisionExhausted { needed, available: ex.prec() });
    }
    let started = Instant::now();
    let mut checks = Vec::new();

    // 1. Basis shape.
    let basis = special_basis(fq);
    let g = genus(fq.q(), 3);
    let k = p.pow(3) + 1;
    let full = monomial_basis(fq, k, 1);
    let dc = double_cusp_basis(fq, k, 1);
    let mut special_pairs: Vec<(i64, i64)> = basis
        .iter()
        .map(|f| {
            let t = f.terms();
            (t[0].0, t[0].1)
        })
        .collect();
    special_pairs.sort_unstable_by_key(|&(_, b)| b);
    let shape_ok = full.len() as i64 == g + 1 && dc.len() as i64 == g && special_pairs == dc;
    checks.push(check(
        "special-basis-is-double-cusp-slice",
        shape_ok,
        format!(
            "dim M_{{{k},1}} = {} (want {}), double-cuspidal slice {} (want {}), exponents {:?}",
            full.len(),
            g + 1,
            dc.len(),
            g,
            special_pairs
        ),
    ));

    // 2. Symbolic Wronskian collapses to one monomial.
    let w = wronskian_serre(fq, &basis)?;
    let a_exp = (p * p * (p - 1) / 2, p * p * (p + 1) / 2);
    let one = Rat::from_int(fq, 1);
    let minus_one = one.neg(fq);
    let mut sign: Option<i64> = None;
    let monomial_ok = w.terms().len() == 1 && {
        let (a, b, ref c) = w.terms()[0];
        let sgn = if *c == one {
            Some(1)
        } else if *c == minus_one {
            Some(-1)
        } else {
            None
        };
        sign = sgn;
        (a, b) == a_exp && sgn.is_some()
    };
    checks.push(check(
        "symbolic-wronskian-is-signed-monomial",
        monomial_ok,
        format!(
            "det(∂_m f_i) = {}; want ±g^{}*h^{}; sign = {:?}",
            w.to_text(fq),
            a_exp.0,
            a_exp.1,
            sign
        ),
    ));

    // 3. Series Wronskian equals the expansion of the symbolic one.
    let expanded: Vec<KSeries> =
        basis.iter().map(|f| ex.expand(f)).collect::<Result<_>>()?;
    let ws = wronskian_series(ex.alpha_table(), &expanded)?;
    let symbolic = ex.expand(&w)?;
    let series_ok = ws.eq_series(ex.kf(), &symbolic) && ws.prec() > order;
    checks.push(check(
        "series-wronskian-matches-symbolic",
        series_ok,
        format!(
            "agreement through O(u^{}); symbolic expansion through O(u^{})",
            ws.prec().min(symbolic.prec()),
            symbolic.prec()
        ),
    ));

    // 4. Exact u-order.
    let ord = ws.ord(ex.kf());
    checks.push(check(
        "wronskian-u-order",
        ord == Some(order),
        format!("ord_u = {ord:?}, want Some({order})"),
    ));

    Ok(VerifyReport {
        statement: "wronskian-computation".into(),
        q: fq.q(),
        pi: None,
        prec: ex.prec(),
        elapsed_ms: started.elapsed().as_millis(),
        checks,
    })
}

/// Verify, at a cubic prime π over F_p, the supersingular factorization of
/// the squared Wronskian monomial G = (g^{p²(p−1)/2}·h^{p²(p+1)/2})²:
///
/// 1. its weight/type decomposition is μ = 2p³−2p²+3p−1, γ = p−1, and its
///    companion polynomial is exactly x^{(p−1)²};
/// 2. in (A/π)[x],
///        (−x)^{p−1} · P(G, x) · P(g₃, x)^{p(p−1)} = S_π(x)^{p(p−1)},
///    both sides monic of degree (g+1)·p(p−1).
///
/// Pre: q = p prime and deg π = 3.
pub fn verify_theorem_ahlgrenono(ex: &Expander, ctx: &PrimeContext) -> Result<VerifyReport> {
    let fq = ex.fq();
    if fq.e() != 1 {
        return Err(Error::InvalidArgument(format!(
            "supersingular factorization verification needs prime q, got q = {}",
            fq.q()
        )));
    }
    if ctx.d() != 3 {
        return Err(Error::InvalidArgument(format!(
            "supersingular factorization verification needs a cubic prime, got degree {}",
            ctx.d()
        )));
    }
    let started = Instant::now();
    let p = fq.p() as i64;
    let res = ctx.res();
    let mut checks = Vec::new();

    // G = (g^{p²(p−1)/2} h^{p²(p+1)/2})² = g^{p²(p−1)} h^{p²(p+1)}.
    let big_g = Form::monomial(fq, p * p * (p - 1), p * p * (p + 1), Rat::from_int(fq, 1))
        .expect("monomial exponents are nonnegative");
    let k = 2 * p * (p.pow(3) + p);
    debug_assert_eq!(big_g.weight(), k);

    // 1. Weight decomposition and companion power of x.
    let (mu, gamma) = mu_gamma(fq, k, 2)?;
    let cp = companion(fq, &big_g)?;
    let want_deg = ((p - 1) * (p - 1)) as usize;
    let x_pow = XPoly::monomial(ex.kf(), want_deg, ex.kf().one());
    let comp_ok =
        (mu, gamma) == (2 * p.pow(3) - 2 * p * p + 3 * p - 1, p - 1) && cp.poly == x_pow;
    checks.push(check(
        "companion-of-squared-wronskian",
        comp_ok,
        format!(
            "(μ, γ) = ({mu}, {gamma}), want ({}, {}); P(G, x) = {}, want x^{want_deg}",
            2 * p.pow(3) - 2 * p * p + 3 * p - 1,
            p - 1,
            cp.poly.to_text(ex.kf(), "x")
        ),
    ));

    // 2. (−x)^{p−1} · P(G) · P(g₃)^{p(p−1)} = S_π^{p(p−1)} in (A/π)[x].
    let e = (p * (p - 1)) as u64;
    let g3 = ex.g_d_form(3)?;
    let p_g3 = ctx.reduce_xpoly(&companion(fq, &g3)?.poly)?;
    let p_big = ctx.reduce_xpoly(&cp.poly)?;
    let s = ctx.ss_poly(ex)?;
    let minus_x = XPoly::monomial(res, 1, res.neg(&res.one()));
    let lhs = minus_x
        .pow(res, p as u64 - 1)
        .mul(res, &p_big)
        .mul(res, &p_g3.pow(res, e));
    let rhs = s.pow(res, e);
    let want_factor_deg = ((ctx.genus() + 1) as u64 * e) as usize;
    let factor_ok = lhs == rhs && rhs.deg() == Some(want_factor_deg);
    checks.push(check(
        "supersingular-factorization",
        factor_ok,
        format!(
            "deg lhs = {:?}, deg rhs = {:?} (want {want_factor_deg}); equal: {}",
            lhs.deg(),
            rhs.deg(),
            lhs == rhs
        ),
    ));

    Ok(VerifyReport {
        statement: "wronskian-supersingular-factorization".into(),
        q: fq.q(),
        pi: Some(ctx.pi().to_text()),
        prec: ex.prec(),
        elapsed_ms: started.elapsed().as_millis(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Series;

    fn f3() -> Fq {
        Fq::new(3, 1).unwrap()
    }

    #[test]
    fn genus_small_degrees() {
        assert_eq!(genus(3, 1), 0);
        assert_eq!(genus(3, 2), 0);
        assert_eq!(genus(3, 3), 3);
        assert_eq!(genus(3, 4), 9);
        assert_eq!(genus(5, 3), 5);
        assert_eq!(genus(5, 4), 25);
    }

    #[test]
    fn special_basis_q3() {
        let fq = f3();
        let basis = special_basis(&fq);
        let pairs: Vec<(i64, i64)> = basis.iter().map(|f| {
            assert_eq!(f.weight(), 28);
            assert_eq!(f.type_l(), 1);
            let t = f.terms();
            assert_eq!(t.len(), 1);
            (t[0].0, t[0].1)
        }).collect();
        assert_eq!(pairs, vec![(0, 7), (4, 5), (8, 3)]);
    }

    #[test]
    fn serre_wronskian_is_signed_monomial() {
        // p = 3: lower-triangular mod 3 once expanded, so the determinant
        // collapses to −g⁹h¹⁸.
        let fq = f3();
        let w = wronskian_serre(&fq, &special_basis(&fq)).unwrap();
        let minus_one = Rat::from_int(&fq, -1);
        assert_eq!(w.terms(), &[(9, 18, minus_one)]);
        assert_eq!(w.weight(), 90);
        assert_eq!(w.type_l(), 0);

        // A single form is its own Wronskian; an over-long list is refused.
        let g = Form::g(&fq);
        assert_eq!(wronskian_serre(&fq, &[g.clone()]).unwrap(), g);
        let four = vec![g.clone(), g.clone(), g.clone(), g];
        assert!(matches!(
            wronskian_serre(&fq, &four),
            Err(Error::SerreOrderTooLarge { n: 3, q: 3 })
        ));
    }

    #[test]
    fn series_wronskian_small_cases() {
        let fq = f3();
        let at = AlphaTable::new(fq.clone());
        let kf = KField { fq: fq.clone() };
        // W(f) = f.
        let f = Series::from_coeffs(
            &kf,
            vec![Rat::from_int(&fq, 1), Rat::from_int(&fq, 2), Rat::from_int(&fq, 1)],
            12,
        );
        assert!(wronskian_series(&at, &[f.clone()]).unwrap().eq_series(&kf, &f));
        // W(1, f) = D₁(f).
        let one = Series::one(&kf, 12);
        let w = wronskian_series(&at, &[one, f.clone()]).unwrap();
        assert!(w.eq_series(&kf, &hyperderivative(&at, &f, 1)));
        // Duplicate rows: zero through the surviving window.
        let w0 = wronskian_series(&at, &[f.clone(), f]).unwrap();
        assert!(w0.is_zero(&kf));
    }

    #[test]
    fn series_wronskian_multilinearity() {
        let fq = f3();
        let at = AlphaTable::new(fq.clone());
        let kf = KField { fq: fq.clone() };
        let a = Series::from_coeffs(
            &kf,
            (0..14).map(|i| Rat::from_int(&fq, (i * i + 1) % 7)).collect(),
            14,
        );
        let b = Series::from_coeffs(
            &kf,
            (0..14).map(|i| Rat::from_int(&fq, (2 * i + 3) % 5)).collect(),
            14,
        );
        let w_ab = wronskian_series(&at, &[a.clone(), b.clone()]).unwrap();
        let w_ba = wronskian_series(&at, &[b.clone(), a.clone()]).unwrap();
        assert!(w_ab.eq_series(&kf, &w_ba.neg(&kf)));
        let c = Rat::from_poly(crate::poly::Poly::t());
        let w_scaled = wronskian_series(&at, &[a.scalar_mul(&kf, &c), b]).unwrap();
        assert!(w_scaled.eq_series(&kf, &w_ab.scalar_mul(&kf, &c)));
    }

    #[test]
    fn verify_reports_pass_at_q3() {
        let fq = f3();
        let ex = Expander::new(fq.clone(), 70);
        let rep = verify_theorem_computation(&ex).unwrap();
        assert!(rep.passed(), "{:?}", rep.checks);
        assert!(rep.pi.is_none());
        let ctx = PrimeContext::new(
            &fq,
            crate::poly::parse_poly(&fq, "T^3 + 2*T + 1").unwrap(),
        )
        .unwrap();
        let rep2 = verify_theorem_ahlgrenono(&ex, &ctx).unwrap();
        assert!(rep2.passed(), "{:?}", rep2.checks);
        // Too-small windows are refused rather than silently truncated.
        let tiny = Expander::new(fq.clone(), 30);
        assert!(matches!(
            verify_theorem_computation(&tiny),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn epsilon_and_shift_exponents() {
        let fq = f3();
        // Odd degree: the type part is divisible by q+1 only at γ = 0.
        assert_eq!(epsilon(&fq, 3).unwrap(), 0);
        assert_eq!(epsilon(&fq, 5).unwrap(), 0);
        // Even degree 4 over F₃: γ(7380, 0) = 2, so ε = (3·90 − 2)/4 = 67.
        assert_eq!(epsilon(&fq, 4).unwrap(), 67);
        assert_eq!(exponent_a(&fq, 3).unwrap(), 4);
        assert!(matches!(epsilon(&fq, 2), Err(Error::InvalidArgument(_))));
        assert!(matches!(exponent_a(&fq, 1), Err(Error::InvalidArgument(_))));
    }
}
