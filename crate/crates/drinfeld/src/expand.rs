//! u-expansions at the infinite cusp: additive polynomials, the Carlitz
//! module, Goss polynomials, the parameters u_a, the Eisenstein-type
//! series E and g_i, the forms g and h, and identification of a u-series
//! as an isobaric form.
//!
//! Conventions. A = F_q[T] acts through a rank-one or rank-two module
//! structure given by an additive polynomial φ_T; for the Carlitz module
//! ρ_T = T·x + x^q. Writing e_C for the Carlitz exponential and
//! u = 1/e_C(z) for the uniformizer at infinity, the parameter of level a
//! is u_a = 1/e_C(a·z). With ρ_a = Σ_i l_i·τ^i (l_i ∈ A, deg l_i ≤
//! q^i·(deg a − i), leading l_D = lc(a)) one has, exactly,
//!
//!     u_a = u^{q^D} / (Σ_i l_i·u^{q^D − q^i}),   D = deg a,
//!
//! a unit multiple of u^{q^D} computed here by one sparse inversion.
//!
//! The u-expansions produced by [`Expander`]:
//!
//! * E = Σ_{a monic} a·u_a (weight 2, type 1; a false Eisenstein series —
//!   it is not modular, which [`Expander::identify`] detects);
//! * g_i = 1 + β_i·Σ_{a monic} G_{q^i−1}(u_a) with β_i = 1/ζ(q^i−1)-ratio,
//!   the weight q^i−1, type 0 Eisenstein family; g = g_1;
//! * h = (q−1)·E·g − D_1(g), of weight q+1 and type 1, beginning −u.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::coeff::{CoeffField, KField};
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::forms::{monomial_basis, Form};
use crate::hyperderiv::{hyperderivative, AlphaTable};
use crate::poly::{monic_polys, Poly};
use crate::rat::Rat;
use crate::series::{KSeries, Series};
use crate::xpoly::XPoly;

/// An additive (F_q-linear) polynomial Σ c_i·x^{q^i}, stored by its
/// τ-coefficients c_i (τ = the q-power Frobenius).
#[derive(Clone, Debug)]
pub struct AddPoly<F: CoeffField> {
    coeffs: Vec<F::Elem>,
}

impl<F: CoeffField> PartialEq for AddPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: CoeffField> AddPoly<F> {
    pub fn from_coeffs(f: &F, mut coeffs: Vec<F::Elem>) -> AddPoly<F> {
        while coeffs.last().map(|c| f.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        AddPoly { coeffs }
    }

    /// The scalar map x ↦ c·x.
    pub fn scalar(f: &F, c: F::Elem) -> AddPoly<F> {
        AddPoly::from_coeffs(f, vec![c])
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, f: &F, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// τ-degree: the largest i with c_i ≠ 0.
    pub fn deg_tau(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, f: &F, rhs: &AddPoly<F>) -> AddPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(&self.coeff(f, i), &rhs.coeff(f, i))).collect();
        AddPoly::from_coeffs(f, coeffs)
    }

    /// Composition (self ∘ rhs): the τ-coefficients multiply twistedly,
    /// (φ∘ψ)_k = Σ_{i+j=k} φ_i·(ψ_j)^{q^i}.
    pub fn compose(&self, f: &F, rhs: &AddPoly<F>) -> AddPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return AddPoly { coeffs: Vec::new() };
        }
        let q = f.q();
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out = vec![f.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            // q^i as a repeated power; exponents stay tiny (i ≤ deg_tau).
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                let mut tw = b.clone();
                for _ in 0..i {
                    tw = f.pow_u64(&tw, q);
                }
                out[i + j] = f.add(&out[i + j], &f.mul(a, &tw));
            }
        }
        AddPoly::from_coeffs(f, out)
    }
}

/// The image of a ∈ A under the ring homomorphism T ↦ φ_T into additive
/// polynomials, by Horner: ρ_{aT+c} = ρ_a ∘ φ_T + c·x.
pub fn rho_image<F: CoeffField>(f: &F, a: &Poly, phi_t: &AddPoly<F>) -> AddPoly<F> {
    let digits = a.coeffs();
    if digits.is_empty() {
        return AddPoly::from_coeffs(f, Vec::new());
    }
    let mut acc = AddPoly::scalar(f, f.from_fq(*digits.last().unwrap()));
    for &c in digits.iter().rev().skip(1) {
        acc = acc.compose(f, phi_t);
        if c != 0 {
            acc = acc.add(f, &AddPoly::scalar(f, f.from_fq(c)));
        }
    }
    acc
}

/// ρ_a for the Carlitz module ρ_T = T·x + x^q, with coefficients in A.
pub fn carlitz_rho(fq: &Fq, a: &Poly) -> AddPoly<KField> {
    let kf = KField::new(fq.clone());
    let phi_t = AddPoly::from_coeffs(&kf, vec![Rat::from_poly(Poly::t()), Rat::one()]);
    rho_image(&kf, a, &phi_t)
}

/// The Carlitz exponential e_C(z) = Σ_j z^{q^j}/d_j as a z-series to the
/// given precision.
pub fn carlitz_exp(fq: &Fq, prec: usize) -> KSeries {
    let kf = KField::new(fq.clone());
    let mut s = Series::zero(&kf, prec);
    let mut qj = 1u64;
    let mut j = 0u32;
    while (qj as usize) < prec {
        let dj = crate::poly::d_factorial(fq, j).expect("d_j within degree bounds");
        s.set_coeff(qj as usize, Rat::from_poly(dj).inv(fq).expect("d_j nonzero"));
        j += 1;
        match qj.checked_mul(fq.q()) {
            Some(next) => qj = next,
            None => break,
        }
    }
    s
}

/// The coefficient of z^k in z/e_C(z), defined only for k ≡ 0 (mod q−1);
/// these are the rational numbers comparing Eisenstein constants to the
/// period, e.g. the k = q−1 value is −1/[1].
pub fn zeta_ratio(fq: &Fq, k: u64) -> Result<Rat> {
    if k % (fq.q() - 1) != 0 {
        return Err(Error::ZetaIndex { k });
    }
    let kf = KField::new(fq.clone());
    let prec = k as usize + 1;
    // e_C(z)/z is a unit series; its inverse is z/e_C(z).
    let e = carlitz_exp(fq, prec + 1);
    let unit = Series::from_coeffs(&kf, e.coeffs()[1..].to_vec(), prec);
    Ok(unit.invert(&kf)?.coeff(k as usize).clone())
}

/// The k-th Goss polynomial G_k(t) = Σ_m c_{m,k}·t^{m+1} with
/// c_{m,k} = [x^{k−1}] e_C(x)^m, truncated to t-degree ≤ min(cap, k).
/// (c_{m,k} = 0 for m ≥ k, so the t-degree never exceeds k.)
pub fn goss_poly(fq: &Fq, k: u64, cap: usize) -> XPoly<KField> {
    let kf = KField::new(fq.clone());
    assert!(k >= 1, "Goss polynomials are indexed from k = 1");
    let top = (cap as u64).min(k) as usize; // largest t-exponent kept
    if top == 0 {
        return XPoly::zero();
    }
    let prec = k as usize;
    let e = carlitz_exp(fq, prec);
    // coeffs[j] = coefficient of t^j = c_{j−1,k} = [x^{k−1}] e_C^{j−1}.
    let mut coeffs = vec![Rat::zero(); top + 1];
    let mut power = Series::one(&kf, prec);
    for m in 0..top {
        if m > 0 {
            power = power.mul(&kf, &e).truncate(prec);
        }
        coeffs[m + 1] = power.coeff(k as usize - 1).clone();
    }
    XPoly::from_coeffs(&kf, coeffs)
}

/// Exact u-expansion engine for a fixed (q, precision). All series it
/// returns are u-series to precision `prec` with coefficients in K.
/// Caches are internally synchronized; `&Expander` is freely shared
/// across threads.
pub struct Expander {
    fq: Fq,
    kf: KField,
    prec: usize,
    alpha: AlphaTable,
    ua_cache: Mutex<HashMap<Poly, KSeries>>,
    gk_cache: Mutex<HashMap<u32, KSeries>>,
    gd_forms: Mutex<HashMap<u32, Form>>,
    e_series: OnceLock<KSeries>,
    g_series: OnceLock<KSeries>,
    h_series: OnceLock<KSeries>,
    g_pows: Mutex<Vec<KSeries>>,
    h_pows: Mutex<Vec<KSeries>>,
}

impl Expander {
    pub fn new(fq: Fq, prec: usize) -> Expander {
        assert!(prec >= 2, "u-expansions need at least 2 coefficients");
        let kf = KField::new(fq.clone());
        Expander {
            alpha: AlphaTable::new(fq.clone()),
            fq,
            kf,
            prec,
            ua_cache: Mutex::new(HashMap::new()),
            gk_cache: Mutex::new(HashMap::new()),
            gd_forms: Mutex::new(HashMap::new()),
            e_series: OnceLock::new(),
            g_series: OnceLock::new(),
            h_series: OnceLock::new(),
            g_pows: Mutex::new(Vec::new()),
            h_pows: Mutex::new(Vec::new()),
        }
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn kf(&self) -> &KField {
        &self.kf
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn alpha_table(&self) -> &AlphaTable {
        &self.alpha
    }

    /// The parameter u_a for nonzero a ∈ A: u^{q^D} times the inverse of
    /// the sparse unit Σ_i l_i·u^{q^D−q^i}.
    pub fn u_sub_a(&self, a: &Poly) -> Result<KSeries> {
        if a.is_zero() {
            return Err(Error::InvalidArgument("u_a requires a nonzero a".to_string()));
        }
        let cacheable = a.deg().unwrap_or(0) <= 2;
        if cacheable {
            if let Some(s) = self.ua_cache.lock().unwrap().get(a) {
                return Ok(s.clone());
            }
        }
        let s = self.u_sub_a_pow(a, 1)?;
        if cacheable {
            self.ua_cache.lock().unwrap().insert(a.clone(), s.clone());
        }
        Ok(s)
    }

    /// u_a^e computed without long multiplications: the defining unit is
    /// raised to the e-th power while still sparse, then inverted once.
    fn u_sub_a_pow(&self, a: &Poly, e: u64) -> Result<KSeries> {
        let fq = &self.fq;
        let kf = &self.kf;
        let rho = carlitz_rho(fq, a);
        let dd = rho.deg_tau().expect("a is nonzero");
        debug_assert_eq!(dd as i64, a.deg_i64());
        let qd = fq.q().checked_pow(dd as u32).filter(|&v| (v as usize) < usize::MAX / 2);
        let qd = match qd {
            Some(v) => v as usize,
            None => return Err(Error::InvalidArgument(format!("deg a = {dd} is out of range"))),
        };
        let ord = qd
            .checked_mul(e as usize)
            .filter(|&v| v < self.prec)
            .ok_or(Error::PrecisionExhausted { needed: qd.saturating_mul(e as usize) + 1, available: self.prec })?;
        // The unit P(u) = Σ l_i·u^{q^D − q^i}; l_D = lc(a) sits at u^0.
        let mut unit = Series::zero(kf, self.prec - ord);
        let mut qi = 1usize;
        for i in 0..=dd {
            let li = rho.coeff(kf, i);
            if !li.is_zero() {
                debug_assert!(
                    li.is_integral()
                        && li.num().deg_i64() <= (qi as i64) * (dd as i64 - i as i64),
                    "Carlitz coefficient degree bound violated"
                );
                if qd - qi < unit.prec() {
                    unit.set_coeff(qd - qi, li);
                }
            }
            qi *= fq.q() as usize;
        }
        let powered = if e == 1 { unit } else { unit.pow(kf, e).truncate(self.prec - ord) };
        Ok(powered.invert(kf)?.shift_up(kf, ord))
    }

    /// Monic a of every degree that can touch precision `prec` through
    /// terms of u-order ≥ scale·q^{deg a}.
    fn monic_reps(&self, scale: usize) -> Vec<Poly> {
        let mut out = Vec::new();
        let mut qd = 1usize;
        let mut d = 0u32;
        loop {
            if qd.saturating_mul(scale) >= self.prec {
                break;
            }
            out.extend(monic_polys(&self.fq, d));
            d += 1;
            match qd.checked_mul(self.fq.q() as usize) {
                Some(next) => qd = next,
                None => break,
            }
        }
        out
    }

    /// Split a list of jobs across threads and sum the series results.
    /// Exact arithmetic makes the result independent of the split.
    fn parallel_sum<T, F>(&self, jobs: &[T], f: F) -> Result<KSeries>
    where
        T: Sync,
        F: Fn(&T) -> Result<KSeries> + Sync + Send,
    {
        let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        let chunk = jobs.len().div_ceil(threads.max(1)).max(1);
        let kf = &self.kf;
        let f = &f;
        let partials: Result<Vec<KSeries>> = std::thread::scope(|scope| {
            let handles: Vec<_> = jobs
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        let mut acc = Series::zero(kf, self.prec);
                        for job in part {
                            acc = acc.add(kf, &f(job)?);
                        }
                        Ok(acc)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut acc = Series::zero(kf, self.prec);
        for p in partials? {
            acc = acc.add(kf, &p);
        }
        Ok(acc)
    }

    /// E = Σ_{a monic} a·u_a, the weight-2 type-1 false Eisenstein series;
    /// E = u + u^{q+2} + ... begins with u.
    pub fn e_series(&self) -> Result<&KSeries> {
        if let Some(s) = self.e_series.get() {
            return Ok(s);
        }
        let reps = self.monic_reps(1);
        let sum = self.parallel_sum(&reps, |a| {
            Ok(self.u_sub_a(a)?.scalar_mul(&self.kf, &Rat::from_poly(a.clone())))
        })?;
        Ok(self.e_series.get_or_init(|| sum))
    }

    /// The Eisenstein series of weight q^i − 1 and type 0:
    /// g_i = 1 + β·Σ_{a monic} G_{q^i−1}(u_a) with β = 1/zeta_ratio(q^i−1).
    pub fn gk_series(&self, i: u32) -> Result<KSeries> {
        if i == 0 {
            return Err(Error::InvalidArgument("g_i is defined for i ≥ 1".to_string()));
        }
        if let Some(s) = self.gk_cache.lock().unwrap().get(&i) {
            return Ok(s.clone());
        }
        let fq = &self.fq;
        let kf = &self.kf;
        let k = fq
            .q()
            .checked_pow(i)
            .map(|v| v - 1)
            .ok_or_else(|| Error::InvalidArgument(format!("q^{i} is out of range")))?;
        let beta = zeta_ratio(fq, k)?.inv(fq)?;
        let gp = goss_poly(fq, k, self.prec);
        let reps = self.monic_reps(1);
        let sum = self.parallel_sum(&reps, |a| self.goss_at_u_a(&gp, a))?;
        let s = Series::one(kf, self.prec).add(kf, &sum.scalar_mul(kf, &beta));
        self.gk_cache.lock().unwrap().insert(i, s.clone());
        Ok(s)
    }

    /// Evaluate a Goss polynomial at u_a. For a = 1 the parameter is u
    /// itself and the coefficients are placed directly; otherwise the
    /// nonzero terms are folded Horner-style through powers of u_a, each
    /// intermediate truncated to what survives the remaining shifts.
    fn goss_at_u_a(&self, gp: &XPoly<KField>, a: &Poly) -> Result<KSeries> {
        let kf = &self.kf;
        let n = self.prec;
        if a.is_one() {
            let mut out = Series::zero(kf, n);
            for (j, c) in gp.coeffs().iter().enumerate() {
                if j < n && !c.is_zero() {
                    out.set_coeff(j, c.clone());
                }
            }
            return Ok(out);
        }
        let d = a.deg().expect("a is monic") as u32;
        let qd = self.fq.q().pow(d) as usize;
        // Nonzero terms (t-exponent, coefficient), highest first.
        let terms: Vec<(usize, &Rat)> = gp
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(j, c)| *j >= 1 && !c.is_zero() && j.saturating_mul(qd) < n)
            .collect();
        if terms.is_empty() {
            return Ok(Series::zero(kf, n));
        }
        let ua = self.u_sub_a(a)?;
        let mut acc = Series::from_coeffs(kf, vec![terms[0].1.clone()], n.saturating_sub(terms[0].0 * qd).max(1));
        let mut exp_left = terms[0].0; // t-exponent still to be applied
        for &(j, c) in terms.iter().skip(1) {
            acc = self.mul_ua_power(&acc, a, &ua, exp_left - j)?;
            acc = acc.add(kf, &Series::from_coeffs(kf, vec![c.clone()], acc.prec()));
            exp_left = j;
        }
        acc = self.mul_ua_power(&acc, a, &ua, exp_left)?;
        Ok(acc.truncate(n.min(acc.prec())))
    }

    /// acc·u_a^e, going through the sparse route for the power.
    fn mul_ua_power(&self, acc: &KSeries, a: &Poly, ua: &KSeries, e: usize) -> Result<KSeries> {
        let kf = &self.kf;
        match e {
            0 => Ok(acc.clone()),
            1 => Ok(acc.mul(kf, ua)),
            _ => Ok(acc.mul(kf, &self.u_sub_a_pow(a, e as u64)?)),
        }
    }

    /// g = g_1 = 1 − [1]·u^{q−1} + ...
    pub fn g_series(&self) -> Result<&KSeries> {
        if let Some(s) = self.g_series.get() {
            return Ok(s);
        }
        let s = self.gk_series(1)?;
        Ok(self.g_series.get_or_init(|| s))
    }

    /// h = (q−1)·E·g − D_1(g), of weight q+1 and type 1, beginning −u.
    pub fn h_series(&self) -> Result<&KSeries> {
        if let Some(s) = self.h_series.get() {
            return Ok(s);
        }
        let kf = &self.kf;
        let e = self.e_series()?;
        let g = self.g_series()?;
        let qm1 = Rat::from_int(&self.fq, self.fq.q() as i64 - 1);
        let eg = e.mul(kf, g).truncate(self.prec).scalar_mul(kf, &qm1);
        let d1g = hyperderivative(&self.alpha, g, 1);
        let s = eg.sub(kf, &d1g);
        Ok(self.h_series.get_or_init(|| s))
    }

    fn g_pow(&self, n: usize) -> Result<KSeries> {
        let g = self.g_series()?.clone();
        let mut cache = self.g_pows.lock().unwrap();
        if cache.is_empty() {
            cache.push(Series::one(&self.kf, self.prec));
        }
        while cache.len() <= n {
            let next = cache.last().unwrap().mul(&self.kf, &g).truncate(self.prec);
            cache.push(next);
        }
        Ok(cache[n].clone())
    }

    fn h_pow(&self, n: usize) -> Result<KSeries> {
        let h = self.h_series()?.clone();
        let mut cache = self.h_pows.lock().unwrap();
        if cache.is_empty() {
            cache.push(Series::one(&self.kf, self.prec));
        }
        while cache.len() <= n {
            let next = cache.last().unwrap().mul(&self.kf, &h).truncate(self.prec);
            cache.push(next);
        }
        Ok(cache[n].clone())
    }

    /// The u-expansion of an isobaric form: the ring homomorphism sending
    /// g and h to their series.
    pub fn expand(&self, f: &Form) -> Result<KSeries> {
        let kf = &self.kf;
        let mut acc = Series::zero(kf, self.prec);
        for (a, b, c) in f.terms() {
            let m = self
                .g_pow(*a as usize)?
                .mul(kf, &self.h_pow(*b as usize)?)
                .truncate(self.prec);
            acc = acc.add(kf, &m.scalar_mul(kf, c));
        }
        Ok(acc)
    }

    /// Identify a u-series as an isobaric form of grade (k, l), by the
    /// triangular structure of monomial expansions: g^a·h^b = (−1)^b·u^b +
    /// higher order. Requires precision at least b_max + 11; the full
    /// available window of the residual must vanish, otherwise the series
    /// is not modular of this grade.
    pub fn identify(&self, s: &KSeries, k: i64, l: i64) -> Result<Form> {
        let kf = &self.kf;
        let fq = &self.fq;
        let basis = monomial_basis(fq, k, l);
        let b_max = basis.last().map(|&(_, b)| b).unwrap_or(-1);
        let needed = (b_max + 11) as usize;
        if s.prec() < needed {
            return Err(Error::PrecisionExhausted { needed, available: s.prec() });
        }
        let mut residual = s.clone();
        let mut terms = Vec::new();
        for &(a, b) in &basis {
            let lead = residual.coeff(b as usize).clone();
            if lead.is_zero() {
                continue;
            }
            // Leading coefficient of g^a·h^b is (−1)^b.
            let c = if b % 2 == 1 { lead.neg(fq) } else { lead };
            let mono = self
                .g_pow(a as usize)?
                .mul(kf, &self.h_pow(b as usize)?)
                .truncate(self.prec);
            residual = residual.sub(kf, &mono.scalar_mul(kf, &c));
            terms.push((a, b, c));
        }
        if !residual.is_zero(kf) {
            return Err(Error::NotModular { k, l });
        }
        Form::new(fq, k, l, terms)
    }

    /// The modular form g_d behind the Eisenstein series g_d = gk_series(d),
    /// identified in grade (q^d − 1, 0). Its coefficients are guaranteed to
    /// lie in A; this is asserted.
    pub fn g_d_form(&self, d: u32) -> Result<Form> {
        if let Some(f) = self.gd_forms.lock().unwrap().get(&d) {
            return Ok(f.clone());
        }
        let series = self.gk_series(d)?;
        let k = self
            .fq
            .q()
            .checked_pow(d)
            .map(|v| v as i64 - 1)
            .ok_or_else(|| Error::InvalidArgument(format!("q^{d} is out of range")))?;
        let form = self.identify(&series, k, 0)?;
        for (a, b, c) in form.terms() {
            if !c.is_integral() {
                return Err(Error::InternalInconsistency(format!(
                    "g_{d} has a non-integral coefficient at g^{a}*h^{b}: {}",
                    c.to_text()
                )));
            }
        }
        self.gd_forms.lock().unwrap().insert(d, form.clone());
        Ok(form)
    }
}
