//! Arithmetic at a finite prime 𝔭 = (π) of A = F_q[T]: reduction of forms
//! and u-series, supersingular polynomials (by companion polynomial and by
//! brute force over rank-2 Drinfeld modules), filtrations, and the
//! companion-polynomial congruences they satisfy.
//!
//! Everything 𝔭-local hangs off a [`PrimeContext`], which fixes a monic
//! irreducible π of degree d and carries the two constants that recur in
//! every statement: the genus g_𝔭 of the associated modular curve and
//! γ₀ = γ(q^d − 1, 0), the type component of the weight of the Eisenstein
//! form g_d.  Contexts are immutable, so distinct primes can be processed
//! on separate threads.
//!
//! The supersingular polynomial is computed twice, by design:
//!
//! * [`PrimeContext::ss_poly`] — the closed form x^{γ₀}·(P(g_d, x) mod π),
//!   normalized monic, where P is the companion polynomial of the
//!   weight-(q^d−1) Eisenstein form g_d;
//! * [`PrimeContext::ss_poly_bruteforce`] — the product of x − j over the
//!   j-invariants in F_{q^{2d}} whose Drinfeld module φ_T = T + g̃τ + Δ̃τ²
//!   has vanishing Hasse coefficient in φ_π.
//!
//! The two routes share no code above the base arithmetic, which is what
//! makes their agreement a meaningful check.

use serde::Serialize;

use crate::coeff::{CoeffField, QuadElem, QuadField, ResField};
use crate::error::{Error, Result};
use crate::expand::{rho_image, AddPoly, Expander};
use crate::field::Fq;
use crate::forms::{companion, monomial_basis, mu_gamma, Form};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::series::{KSeries, ResSeries, Series};
use crate::wronskian::genus;
use crate::xpoly::XPoly;

// ---------------------------------------------------------------------------
// Prime contexts
// ---------------------------------------------------------------------------

/// A fixed monic irreducible π of degree d over F_q, with the derived
/// constants every 𝔭-local computation needs.
#[derive(Clone, Debug)]
pub struct PrimeContext {
    res: ResField,
    genus: i64,
    gamma0: i64,
}

impl PrimeContext {
    /// Validate π (monic, irreducible) and precompute g_𝔭 and γ₀.
    pub fn new(fq: &Fq, pi: Poly) -> Result<PrimeContext> {
        let res = ResField::new(fq.clone(), pi)?;
        let d = res.d() as u32;
        let g = genus(fq.q(), d);
        let qd = (fq.q() as i64).pow(d);
        let (_, gamma0) = mu_gamma(fq, qd - 1, 0)?;
        Ok(PrimeContext { res, genus: g, gamma0 })
    }

    pub fn fq(&self) -> &Fq {
        &self.res.fq
    }

    pub fn res(&self) -> &ResField {
        &self.res
    }

    pub fn pi(&self) -> &Poly {
        self.res.pi()
    }

    /// deg π.
    pub fn d(&self) -> u32 {
        self.res.d() as u32
    }

    /// Genus g_𝔭 of the modular curve at 𝔭; the supersingular locus has
    /// g_𝔭 + 1 points.
    pub fn genus(&self) -> i64 {
        self.genus
    }

    /// γ₀ = γ(q^d − 1, 0), the type component of the weight decomposition
    /// of the Eisenstein form g_d.
    pub fn gamma0(&self) -> i64 {
        self.gamma0
    }

    // -----------------------------------------------------------------------
    // Reduction mod π
    // -----------------------------------------------------------------------

    /// Reduce a u-series coefficient-wise.  Errors with `NotIntegralAtPi`
    /// if any coefficient has π in its denominator.
    pub fn reduce_series(&self, s: &KSeries) -> Result<ResSeries> {
        s.map_coeffs(&self.res, |c| self.res.reduce_rat(c))
    }

    /// Reduce an isobaric form coefficient-wise; terms that die mod π are
    /// dropped, the grade is kept.
    pub fn reduce_form(&self, f: &Form) -> Result<ModForm> {
        let mut terms = Vec::new();
        for (a, b, c) in f.terms() {
            let r = self.res.reduce_rat(c)?;
            if !r.is_zero() {
                terms.push((*a, *b, r));
            }
        }
        Ok(ModForm { k: f.weight(), l: f.type_l(), terms })
    }

    /// Reduce a polynomial in x coefficient-wise (degree may drop).
    pub fn reduce_xpoly(&self, p: &XPoly<crate::coeff::KField>) -> Result<XPoly<ResField>> {
        let mut coeffs = Vec::with_capacity(p.coeffs().len());
        for c in p.coeffs() {
            coeffs.push(self.res.reduce_rat(c)?);
        }
        Ok(XPoly::from_coeffs(&self.res, coeffs))
    }

    // -----------------------------------------------------------------------
    // Supersingular polynomials
    // -----------------------------------------------------------------------

    /// The supersingular polynomial S_𝔭(x) ∈ (A/π)[x]: monic of degree
    /// g_𝔭 + 1, computed as x^{γ₀} · (P(g_d, x) mod π) normalized monic,
    /// where P is the companion polynomial of the Eisenstein form g_d.
    ///
    /// Before normalizing, the reduced leading coefficient is checked to be
    /// (−1)^{deg P}: the companion's top coefficient comes from the
    /// cusp-form end of g_d and survives reduction as a sign.  x | S_𝔭
    /// exactly when d is odd (j = 0 supersingular).
    pub fn ss_poly(&self, ex: &Expander) -> Result<XPoly<ResField>> {
        let fq = self.fq();
        let gd = ex.g_d_form(self.d())?;
        let cp = companion(fq, &gd)?;
        let deg_p = cp
            .poly
            .deg()
            .ok_or_else(|| Error::InternalInconsistency("companion of g_d is zero".into()))?;
        let pbar = self.reduce_xpoly(&cp.poly)?;
        let want_lead = if deg_p % 2 == 0 {
            self.res.one()
        } else {
            self.res.neg(&self.res.one())
        };
        if pbar.deg() != Some(deg_p) || pbar.leading() != Some(&want_lead) {
            return Err(Error::InternalInconsistency(format!(
                "reduced companion of g_d has leading term {:?}, want (−1)^{deg_p}",
                pbar.leading()
            )));
        }
        let shift = XPoly::monomial(&self.res, self.gamma0 as usize, self.res.one());
        let s = shift.mul(&self.res, &pbar).make_monic(&self.res)?;
        if s.deg() != Some((self.genus + 1) as usize) {
            return Err(Error::InternalInconsistency(format!(
                "supersingular polynomial has degree {:?}, want genus + 1 = {}",
                s.deg(),
                self.genus + 1
            )));
        }
        Ok(s)
    }

    /// Whether the rank-2 Drinfeld module φ_T = t̄ + g̃τ + Δ̃τ² is
    /// supersingular at 𝔭: compute φ_π by substitution, check the τ^i
    /// coefficients vanish for i < d (they must — π kills them), and test
    /// the Hasse coefficient of τ^d.  When it vanishes the remaining
    /// coefficients below τ^{2d} are confirmed to vanish too.
    ///
    /// Pre: Δ̃ ≠ 0.
    pub fn is_supersingular_pair(
        &self,
        quad: &QuadField,
        g_tilde: &QuadElem,
        delta_tilde: &QuadElem,
    ) -> Result<bool> {
        assert!(!quad.is_zero(delta_tilde), "rank-2 module needs Δ̃ ≠ 0");
        let d = self.d() as usize;
        let t0 = quad.from_res(self.res.t_bar());
        let phi_t =
            AddPoly::from_coeffs(quad, vec![t0, g_tilde.clone(), delta_tilde.clone()]);
        let phi_pi = rho_image(quad, self.pi(), &phi_t);
        for i in 0..d {
            if !quad.is_zero(&phi_pi.coeff(quad, i)) {
                return Err(Error::InternalInconsistency(format!(
                    "φ_π has a nonzero τ^{i} coefficient below the height bound d = {d}"
                )));
            }
        }
        if !quad.is_zero(&phi_pi.coeff(quad, d)) {
            return Ok(false);
        }
        for i in d + 1..2 * d {
            if !quad.is_zero(&phi_pi.coeff(quad, i)) {
                return Err(Error::InternalInconsistency(format!(
                    "vanishing Hasse coefficient but nonzero τ^{i} in φ_π (d = {d})"
                )));
            }
        }
        if phi_pi.deg_tau() != Some(2 * d) {
            return Err(Error::InternalInconsistency(
                "φ_π does not have τ-degree 2·deg π".into(),
            ));
        }
        Ok(true)
    }

    /// Enumerate the supersingular j-invariants in F_{q^{2d}} by brute
    /// force: j = 0 is tested through (g̃, Δ̃) = (0, 1) and j ≠ 0 through
    /// (1, 1/j) (so that g̃^{q+1}/Δ̃ = j).  The count is checked against
    /// g_𝔭 + 1.
    pub fn ss_bruteforce(&self) -> Result<Vec<QuadElem>> {
        let quad = QuadField::new(self.res.clone())?;
        let mut out = Vec::new();
        for j in quad.elements() {
            let (gt, dt) = if quad.is_zero(&j) {
                (quad.zero(), quad.one())
            } else {
                (quad.one(), quad.inv(&j)?)
            };
            if self.is_supersingular_pair(&quad, &gt, &dt)? {
                out.push(j);
            }
        }
        if out.len() as i64 != self.genus + 1 {
            return Err(Error::InternalInconsistency(format!(
                "found {} supersingular j-invariants, want genus + 1 = {}",
                out.len(),
                self.genus + 1
            )));
        }
        Ok(out)
    }

    /// The monic product Π (x − j) over the brute-force supersingular set.
    /// Its coefficients are Galois-stable, hence land in A/π; a nonzero
    /// component along the quadratic generator is an internal error.
    pub fn ss_poly_bruteforce(&self) -> Result<XPoly<ResField>> {
        let quad = QuadField::new(self.res.clone())?;
        let mut prod = XPoly::one(&quad);
        for j in self.ss_bruteforce()? {
            let factor = XPoly::from_coeffs(&quad, vec![quad.neg(&j), quad.one()]);
            prod = prod.mul(&quad, &factor);
        }
        let mut coeffs = Vec::with_capacity(prod.coeffs().len());
        for c in prod.coeffs() {
            if !c.b.is_zero() {
                return Err(Error::InternalInconsistency(
                    "supersingular product has a coefficient outside A/π".into(),
                ));
            }
            coeffs.push(c.a.clone());
        }
        Ok(XPoly::from_coeffs(&self.res, coeffs))
    }

    // -----------------------------------------------------------------------
    // Filtration and the companion congruences
    // -----------------------------------------------------------------------

    /// The filtration of a 𝔭-integral form f: the least weight k′ in
    /// k − (q^d − 1)·ℕ such that f̄ coincides, as a u-series mod π, with a
    /// form of weight k′ and the same type.  Multiplying by ḡ_d ≡ 1 moves
    /// between the candidate weights, so membership at k′ propagates
    /// upward and the first hit while scanning k′ upward is the filtration.
    /// A form that dies mod π has filtration −∞ ([`Filtration::MinusInfinity`]).
    ///
    /// Membership at k′ is decided by exact elimination against the
    /// reduced monomial-basis expansions on an initial coefficient window,
    /// then confirmed on the full available window.  Errors:
    /// `NotIntegralAtPi` for non-integral coefficients,
    /// `PrecisionExhausted` when the expander window cannot cover the
    /// largest candidate space.
    pub fn filtration(&self, ex: &Expander, f: &Form) -> Result<Filtration> {
        let fq = self.fq();
        let reduced = self.reduce_form(f)?;
        if reduced.is_zero() {
            return Ok(Filtration::MinusInfinity);
        }
        let k = f.weight();
        let l = f.type_l();
        let full_basis = monomial_basis(fq, k, l);
        let b_max = full_basis.last().map(|&(_, b)| b).unwrap_or(0) as usize;
        let required = b_max + 11;
        if ex.prec() < required {
            return Err(Error::PrecisionExhausted { needed: required, available: ex.prec() });
        }
        let sbar = self.reduce_series(&ex.expand(f)?)?;
        let step = (fq.q() as i64).pow(self.d()) - 1;
        for m in (0..=k / step).rev() {
            let kp = k - m * step;
            let basis = monomial_basis(fq, kp, l);
            if basis.is_empty() {
                continue;
            }
            if self.in_span(ex, kp, l, &basis, &sbar)? {
                return Ok(Filtration::Finite(kp));
            }
        }
        Err(Error::InternalInconsistency(
            "a nonzero reduction must lie in its own weight's span".into(),
        ))
    }

    /// Does the reduced series lie in the mod-π span of the monomial basis
    /// of grade (kp, l)?  Solve on a leading window by peeling the
    /// triangular leading terms (the (a, b) monomial starts at u^b with
    /// coefficient (−1)^b), then verify the lifted combination against the
    /// full window.
    fn in_span(
        &self,
        ex: &Expander,
        kp: i64,
        l: i64,
        basis: &[(i64, i64)],
        sbar: &ResSeries,
    ) -> Result<bool> {
        let fq = self.fq();
        let res = &self.res;
        let rows = basis.last().map(|&(_, b)| b).unwrap_or(0) as usize + 11;
        let mut resid = sbar.truncate(rows);
        let mut lifted: Vec<(i64, i64, Rat)> = Vec::new();
        for &(a, b) in basis {
            let mono = Form::monomial(fq, a, b, Rat::from_int(fq, 1))?;
            let exp = self.reduce_series(&ex.expand(&mono)?)?.truncate(rows);
            let lead = resid.coeff(b as usize).clone();
            let c = if b % 2 == 0 { lead } else { res.neg(&lead) };
            if !res.is_zero(&c) {
                resid = resid.sub(res, &exp.scalar_mul(res, &c));
                lifted.push((a, b, Rat::from_poly(c)));
            }
        }
        if !resid.is_zero(res) {
            return Ok(false);
        }
        let candidate = Form::new(fq, kp, l, lifted)?;
        let cand_bar = self.reduce_series(&ex.expand(&candidate)?)?;
        Ok(cand_bar.eq_series(res, sbar))
    }

    /// Check the filtration-driven divisibility bound for a 𝔭-integral
    /// form f of weight k and type l: with α = (k − w_𝔭(f))/(q^d − 1) and
    ///
    ///     a = ⌊(α·γ₀·q + γ(k, l)) / (q + 1)⌋,
    ///
    /// the power S_𝔭(x)^α divides x^a · (P(f, x) mod π).  Returns the
    /// carried exponents and the remainder of the division.  Errors:
    /// `InvalidArgument` if f dies mod π (filtration −∞),
    /// `InternalInconsistency` if k − w is not a multiple of q^d − 1.
    pub fn check_dww(&self, ex: &Expander, f: &Form) -> Result<DwwReport> {
        let fq = self.fq();
        let k = f.weight();
        let l = f.type_l();
        let w = match self.filtration(ex, f)? {
            Filtration::Finite(w) => w,
            Filtration::MinusInfinity => {
                return Err(Error::InvalidArgument(
                    "divisibility bound needs a form with finite filtration".into(),
                ))
            }
        };
        let q = fq.q() as i64;
        let step = q.pow(self.d()) - 1;
        if (k - w) % step != 0 {
            return Err(Error::InternalInconsistency(format!(
                "weight drop {} is not a multiple of q^d − 1 = {step}",
                k - w
            )));
        }
        let alpha = (k - w) / step;
        let (_, gamma_kl) = mu_gamma(fq, k, l)?;
        let a = (alpha * self.gamma0 * q + gamma_kl).div_euclid(q + 1);
        let s = self.ss_poly(ex)?;
        let p_f = self.reduce_xpoly(&companion(fq, f)?.poly)?;
        let lhs = XPoly::monomial(&self.res, a as usize, self.res.one()).mul(&self.res, &p_f);
        let remainder = lhs.rem(&self.res, &s.pow(&self.res, alpha as u64))?;
        Ok(DwwReport {
            weight: k,
            type_l: l,
            filtration: w,
            alpha,
            shift: a,
            passed: remainder.is_zero(),
            remainder: remainder.to_text(&self.res, "x"),
        })
    }

    /// The product congruence for companion polynomials: for 𝔭-integral f,
    ///
    ///     P(f·g_d, x) ≡ P(g_d, x)·P(f, x)          (mod π)
    ///
    /// except when d is odd and γ(k, l) = q, where the right side picks up
    /// a factor −x (the μ-ladder of the product shifts by one rung).
    /// Returns whether the congruence holds with the branch selected by
    /// (d, γ).
    pub fn companion_product_congruence(&self, ex: &Expander, f: &Form) -> Result<bool> {
        let fq = self.fq();
        let gd = ex.g_d_form(self.d())?;
        let p_gd = self.reduce_xpoly(&companion(fq, &gd)?.poly)?;
        let p_f = self.reduce_xpoly(&companion(fq, f)?.poly)?;
        let p_prod = self.reduce_xpoly(&companion(fq, &f.mul(fq, &gd))?.poly)?;
        let (_, gamma_f) = mu_gamma(fq, f.weight(), f.type_l())?;
        let mut rhs = p_gd.mul(&self.res, &p_f);
        if self.d() % 2 == 1 && gamma_f == fq.q() as i64 {
            let minus_x = XPoly::monomial(&self.res, 1, self.res.neg(&self.res.one()));
            rhs = rhs.mul(&self.res, &minus_x);
        }
        Ok(p_prod == rhs)
    }
}

/// Filtration of a form at 𝔭: −∞ for forms that die mod π, otherwise the
/// least congruent weight in which the reduction lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Filtration {
    MinusInfinity,
    Finite(i64),
}

/// Outcome of the filtration divisibility check: the exponents fed into
/// the bound and the division remainder (empty iff the bound holds).
#[derive(Clone, Debug, Serialize)]
pub struct DwwReport {
    pub weight: i64,
    pub type_l: i64,
    pub filtration: i64,
    pub alpha: i64,
    pub shift: i64,
    pub passed: bool,
    pub remainder: String,
}

/// A form reduced mod π: same monomial support in (g, h), coefficients in
/// A/π.
#[derive(Clone, Debug, PartialEq)]
pub struct ModForm {
    k: i64,
    l: i64,
    terms: Vec<(i64, i64, Poly)>,
}

impl ModForm {
    pub fn weight(&self) -> i64 {
        self.k
    }

    pub fn type_l(&self) -> i64 {
        self.l
    }

    pub fn terms(&self) -> &[(i64, i64, Poly)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Text form mirroring `Form::to_text`, e.g. `g^4 + (T + 1)*h^2`.
    pub fn to_text(&self, res: &ResField) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (a, b, c) in &self.terms {
            let mut factors = Vec::new();
            if !c.is_one() || (*a == 0 && *b == 0) {
                let txt = res.fmt_elem(c);
                factors.push(if res.elem_needs_parens(c) { format!("({txt})") } else { txt });
            }
            for (sym, e) in [("g", *a), ("h", *b)] {
                match e {
                    0 => {}
                    1 => factors.push(sym.to_string()),
                    _ => factors.push(format!("{sym}^{e}")),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

/// Reduce a u-series mod π, requiring every visible coefficient to be
/// π-integral (free function convenience over
/// [`PrimeContext::reduce_series`]).
pub fn reduce_series(ctx: &PrimeContext, s: &KSeries) -> Result<Series<ResField>> {
    ctx.reduce_series(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn f3() -> Fq {
        Fq::new(3, 1).unwrap()
    }

    fn ctx(fq: &Fq, pi: &str) -> PrimeContext {
        PrimeContext::new(fq, parse_poly(fq, pi).unwrap()).unwrap()
    }

    #[test]
    fn context_constants() {
        let fq = f3();
        let c1 = ctx(&fq, "T");
        assert_eq!((c1.d(), c1.genus(), c1.gamma0()), (1, 0, 1));
        let c2 = ctx(&fq, "T^2 + 1");
        assert_eq!((c2.d(), c2.genus(), c2.gamma0()), (2, 0, 0));
        let c3 = ctx(&fq, "T^3 - T + 1");
        assert_eq!((c3.d(), c3.genus(), c3.gamma0()), (3, 3, 1));
        assert!(matches!(
            PrimeContext::new(&fq, parse_poly(&fq, "T^3 - T").unwrap()),
            Err(Error::Reducible)
        ));
    }

    #[test]
    fn reduction_examples() {
        let fq = f3();
        let c = ctx(&fq, "T^2 + 1");
        let pi = Rat::from_poly(c.pi().clone());
        // π·g dies mod π; g/π is not integral.
        let g = Form::g(&fq);
        assert!(c.reduce_form(&g.scalar_mul(&fq, &pi)).unwrap().is_zero());
        assert!(matches!(
            c.reduce_form(&g.scalar_mul(&fq, &pi.inv(&fq).unwrap())),
            Err(Error::NotIntegralAtPi(_))
        ));
        // g itself reduces to a nonzero form with the same support.
        let gbar = c.reduce_form(&g).unwrap();
        assert_eq!(gbar.terms().len(), 1);
        assert_eq!(gbar.to_text(c.res()), "g");
    }

    #[test]
    fn eisenstein_series_congruence() {
        let fq = f3();
        let ex = Expander::new(fq.clone(), 30);
        // ḡ_d ≡ 1 as u-series at a prime of degree d.
        let c = ctx(&fq, "T^2 + 1");
        let g2 = ex.g_d_form(2).unwrap();
        let reduced = c.reduce_series(&ex.expand(&g2).unwrap()).unwrap();
        assert!(reduced.eq_series(c.res(), &Series::one(c.res(), 30)));
        // The symbolic reduction is NOT the constant 1 — only the series is.
        assert_eq!(c.reduce_form(&g2).unwrap().terms().len(), 2);
    }

    #[test]
    fn supersingular_pins() {
        let fq = f3();
        let ex = Expander::new(fq.clone(), 45);
        // Degree 1: S_T(x) = x.
        let c1 = ctx(&fq, "T");
        let s1 = c1.ss_poly(&ex).unwrap();
        assert_eq!(s1, XPoly::monomial(c1.res(), 1, c1.res().one()));
        // Degree 2: S(x) = x − T̄ (the companion of g₂ reduces to T̄ − x;
        // monic normalization flips it).  x does not divide S.
        let c2 = ctx(&fq, "T^2 + 1");
        let s2 = c2.ss_poly(&ex).unwrap();
        let t_bar = c2.res().t_bar();
        let want = XPoly::from_coeffs(c2.res(), vec![c2.res().neg(&t_bar), c2.res().one()]);
        assert_eq!(s2, want);
        assert!(!s2.divisible_by(c2.res(), &XPoly::x(c2.res())).unwrap());
        // Both match the brute-force product.
        assert_eq!(s1, c1.ss_poly_bruteforce().unwrap());
        assert_eq!(s2, c2.ss_poly_bruteforce().unwrap());
    }

    #[test]
    fn supersingular_cubic_matches_bruteforce() {
        let fq = f3();
        let ex = Expander::new(fq.clone(), 45);
        let c = ctx(&fq, "T^3 - T + 1");
        let s = c.ss_poly(&ex).unwrap();
        assert_eq!(s.deg(), Some(4));
        // d odd: j = 0 is supersingular, so x | S.
        assert!(s.divisible_by(c.res(), &XPoly::x(c.res())).unwrap());
        assert_eq!(s, c.ss_poly_bruteforce().unwrap());
    }

    #[test]
    fn twist_invariance_of_supersingularity() {
        let fq = f3();
        let c = ctx(&fq, "T^2 + 1");
        let quad = QuadField::new(c.res().clone()).unwrap();
        let q = fq.q();
        for j in quad.elements().into_iter().filter(|j| !quad.is_zero(j)).take(6) {
            let gt = quad.one();
            let dt = quad.inv(&j).unwrap();
            let plain = c.is_supersingular_pair(&quad, &gt, &dt).unwrap();
            for s in quad.elements().into_iter().filter(|s| !quad.is_zero(s)).take(4) {
                let gt2 = quad.mul(&gt, &quad.pow_u64(&s, q - 1));
                let dt2 = quad.mul(&dt, &quad.pow_u64(&s, q * q - 1));
                assert_eq!(c.is_supersingular_pair(&quad, &gt2, &dt2).unwrap(), plain);
            }
        }
    }

    #[test]
    fn filtration_pins() {
        let fq = f3();
        let ex = Expander::new(fq.clone(), 45);
        let c = ctx(&fq, "T^3 - T + 1");
        let g = Form::g(&fq);
        let g3 = ex.g_d_form(3).unwrap();
        assert_eq!(c.filtration(&ex, &g).unwrap(), Filtration::Finite(2));
        assert_eq!(c.filtration(&ex, &g3).unwrap(), Filtration::Finite(0));
        let pi = Rat::from_poly(c.pi().clone());
        assert_eq!(
            c.filtration(&ex, &g.scalar_mul(&fq, &pi)).unwrap(),
            Filtration::MinusInfinity
        );
        // Multiplying by the Eisenstein form leaves the filtration fixed.
        assert_eq!(
            c.filtration(&ex, &g.mul(&fq, &g3)).unwrap(),
            Filtration::Finite(2)
        );
    }

    #[test]
    fn divisibility_bound_on_eisenstein_powers() {
        let fq = f3();
        let ex = Expander::new(fq.clone(), 45);
        let c = ctx(&fq, "T^3 - T + 1");
        let g3 = ex.g_d_form(3).unwrap();
        let r1 = c.check_dww(&ex, &g3).unwrap();
        assert!(r1.passed);
        assert_eq!((r1.alpha, r1.shift, r1.filtration), (1, 1, 0));
        let r2 = c.check_dww(&ex, &g3.mul(&fq, &g3)).unwrap();
        assert!(r2.passed);
        assert_eq!((r2.alpha, r2.shift), (2, 2));
        // Weight = filtration ⇒ α = 0 and the bound is vacuous.
        let r0 = c.check_dww(&ex, &Form::g(&fq)).unwrap();
        assert!(r0.passed);
        assert_eq!(r0.alpha, 0);
    }

    #[test]
    fn companion_product_branches() {
        let fq = f3();
        let ex = Expander::new(fq.clone(), 45);
        // Even degree: the plain product congruence.
        let c2 = ctx(&fq, "T^2 + 1");
        assert!(c2.companion_product_congruence(&ex, &Form::g(&fq)).unwrap());
        assert!(c2.companion_product_congruence(&ex, &Form::one(&fq)).unwrap());
        // Odd degree with γ(k, l) = q: the −x correction branch.
        let c3 = ctx(&fq, "T^3 - T + 1");
        let g_cubed = Form::g(&fq).pow(&fq, 3);
        let (_, gamma) = mu_gamma(&fq, g_cubed.weight(), g_cubed.type_l()).unwrap();
        assert_eq!(gamma, 3);
        assert!(c3.companion_product_congruence(&ex, &g_cubed).unwrap());
        // Odd degree, γ < q: plain branch again.
        assert!(c3.companion_product_congruence(&ex, &Form::g(&fq)).unwrap());
        assert!(c3.companion_product_congruence(&ex, &Form::h(&fq)).unwrap());
    }
}
