//! Coefficient fields for series and polynomials-in-x: a small trait with
//! three implementations.
//!
//! * [`KField`] — K = F_q(T), elements [`Rat`];
//! * [`ResField`] — the residue field A/(π) for monic irreducible π,
//!   elements plain [`Poly`] remainders of degree < deg π;
//! * [`QuadField`] — the quadratic extension A/(π)[Y]/(Y² − ν) ≅ F_{q^{2d}}
//!   for a fixed non-residue ν, used by the brute-force supersingular
//!   enumeration.
//!
//! Elements are plain data; every operation goes through the field context
//! (the pattern used for finite fields throughout this workspace's
//! dependencies). Series over K and series over A/(π) are therefore
//! *different types*, which is what makes "mixing coefficient domains" a
//! compile-time impossibility rather than a runtime error.

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::poly::Poly;
use crate::rat::Rat;

/// What series and x-polynomials need from a coefficient field.
pub trait CoeffField: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Embed an integer through the prime subfield.
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Embed a packed F_q scalar.
    fn from_fq(&self, c: u64) -> Self::Elem;
    /// The characteristic p.
    fn char_p(&self) -> u64;
    /// The base field size q.
    fn q(&self) -> u64;

    fn fmt_elem(&self, a: &Self::Elem) -> String;
    /// Whether `fmt_elem` output needs parentheses when multiplied into a
    /// monomial (more than one term, or a fraction).
    fn elem_needs_parens(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// a^n by binary exponentiation.
    fn pow_u64(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// K = F_q(T)
// ---------------------------------------------------------------------------

/// The rational function field K as a coefficient field.
#[derive(Clone, Debug)]
pub struct KField {
    pub fq: Fq,
}

impl KField {
    pub fn new(fq: Fq) -> KField {
        KField { fq }
    }
}

impl CoeffField for KField {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a.add(&self.fq, b)
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a.sub(&self.fq, b)
    }
    fn neg(&self, a: &Rat) -> Rat {
        a.neg(&self.fq)
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a.mul(&self.fq, b)
    }
    fn inv(&self, a: &Rat) -> Result<Rat> {
        a.inv(&self.fq)
    }
    fn from_int(&self, n: i64) -> Rat {
        Rat::from_int(&self.fq, n)
    }
    fn from_fq(&self, c: u64) -> Rat {
        Rat::from_fq_const(c)
    }
    fn char_p(&self) -> u64 {
        self.fq.p()
    }
    fn q(&self) -> u64 {
        self.fq.q()
    }
    fn fmt_elem(&self, a: &Rat) -> String {
        a.to_text()
    }
    fn elem_needs_parens(&self, a: &Rat) -> bool {
        !a.is_integral() || a.num().term_count() > 1
    }
    fn is_one(&self, a: &Rat) -> bool {
        a.is_one()
    }
}

// ---------------------------------------------------------------------------
// A/(π)
// ---------------------------------------------------------------------------

/// The residue field A/(π): remainders mod a monic irreducible π, reduced
/// after every multiplication.
#[derive(Clone, Debug)]
pub struct ResField {
    pub fq: Fq,
    pi: Poly,
    d: usize,
}

impl ResField {
    /// Build A/(π); π must be monic irreducible of degree ≥ 1.
    pub fn new(fq: Fq, pi: Poly) -> Result<ResField> {
        if !pi.is_monic() {
            return Err(Error::NotMonic);
        }
        if !pi.is_irreducible(&fq) {
            return Err(Error::Reducible);
        }
        let d = pi.deg().expect("irreducible has a degree");
        Ok(ResField { fq, pi, d })
    }

    pub fn pi(&self) -> &Poly {
        &self.pi
    }

    /// deg π.
    pub fn d(&self) -> usize {
        self.d
    }

    /// The field size q^d.
    pub fn size(&self) -> u64 {
        self.fq.q().pow(self.d as u32)
    }

    /// Reduce any polynomial.
    pub fn reduce_poly(&self, f: &Poly) -> Poly {
        f.rem(&self.fq, &self.pi).expect("pi nonzero")
    }

    /// Reduce an element of K; error if the denominator vanishes mod π
    /// (canonical coprime form means that is exactly v_π < 0).
    pub fn reduce_rat(&self, r: &Rat) -> Result<Poly> {
        let den = self.reduce_poly(r.den());
        if den.is_zero() {
            return Err(Error::NotIntegralAtPi(r.to_text()));
        }
        let num = self.reduce_poly(r.num());
        Ok(self.mul(&num, &self.inv(&den)?))
    }

    /// T mod π.
    pub fn t_bar(&self) -> Poly {
        self.reduce_poly(&Poly::t())
    }

    /// All q^d elements in deterministic counting order (coefficient tuples
    /// of the remainder, low degree least significant).
    pub fn elements(&self) -> Vec<Poly> {
        let q = self.fq.q();
        let mut out = Vec::with_capacity(self.size() as usize);
        for v in 0..self.size() {
            let mut coeffs = vec![0u64; self.d];
            let mut rest = v;
            for c in coeffs.iter_mut() {
                *c = rest % q;
                rest /= q;
            }
            out.push(Poly::from_coeffs(coeffs));
        }
        out
    }

    /// The q-power Frobenius of the residue field.
    pub fn frobenius(&self, a: &Poly) -> Poly {
        a.pow_mod(&self.fq, self.fq.q(), &self.pi).expect("pi nonzero")
    }
}

impl CoeffField for ResField {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one()
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(&self.fq, b)
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(&self.fq, b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        a.neg(&self.fq)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce_poly(&a.mul(&self.fq, b))
    }
    fn inv(&self, a: &Poly) -> Result<Poly> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = a.egcd(&self.fq, &self.pi);
        if !g.is_one() {
            return Err(Error::InternalInconsistency(
                "non-invertible residue mod irreducible pi".into(),
            ));
        }
        Ok(self.reduce_poly(&s))
    }
    fn from_int(&self, n: i64) -> Poly {
        Poly::constant(self.fq.from_signed(n))
    }
    fn from_fq(&self, c: u64) -> Poly {
        Poly::constant(c)
    }
    fn char_p(&self) -> u64 {
        self.fq.p()
    }
    fn q(&self) -> u64 {
        self.fq.q()
    }
    fn fmt_elem(&self, a: &Poly) -> String {
        a.to_text()
    }
    fn elem_needs_parens(&self, a: &Poly) -> bool {
        a.term_count() > 1
    }
    fn is_one(&self, a: &Poly) -> bool {
        a.is_one()
    }
}

// ---------------------------------------------------------------------------
// A/(π)[Y]/(Y² − ν) ≅ F_{q^{2d}}
// ---------------------------------------------------------------------------

/// a + b·Y with Y² = ν, ν a fixed quadratic non-residue of A/(π).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElem {
    pub a: Poly,
    pub b: Poly,
}

/// The quadratic extension of A/(π).
#[derive(Clone, Debug)]
pub struct QuadField {
    pub res: ResField,
    nr: Poly,
    /// ν^{(q−1)/2}, the cofactor in Y^q = ν^{(q−1)/2}·Y... for the *q^d*
    /// Frobenius of the ground field: Y^{q^d} = ν^{(q^d−1)/2}·Y = −Y.
    y_frob_q: Poly,
}

impl QuadField {
    /// Build the quadratic extension, choosing the first quadratic
    /// non-residue of A/(π) in counting order (deterministic).
    pub fn new(res: ResField) -> Result<QuadField> {
        let half = (res.size() - 1) / 2;
        let mut nr = None;
        for cand in res.elements() {
            if cand.is_zero() {
                continue;
            }
            let leg = cand.pow_mod(&res.fq, half, res.pi()).expect("pi nonzero");
            if !leg.is_one() {
                nr = Some(cand);
                break;
            }
        }
        let nr = nr.ok_or_else(|| {
            Error::InternalInconsistency("no quadratic non-residue found (q odd!)".into())
        })?;
        let y_frob_q = nr
            .pow_mod(&res.fq, (res.fq.q() - 1) / 2, res.pi())
            .expect("pi nonzero");
        Ok(QuadField { res, nr, y_frob_q })
    }

    pub fn non_residue(&self) -> &Poly {
        &self.nr
    }

    /// Embed a residue element.
    pub fn from_res(&self, a: Poly) -> QuadElem {
        QuadElem { a, b: Poly::zero() }
    }

    /// The q-power Frobenius: (a + bY)^q = a^q + b^q·ν^{(q−1)/2}·Y.
    pub fn frobenius_q(&self, x: &QuadElem) -> QuadElem {
        QuadElem {
            a: self.res.frobenius(&x.a),
            b: self.res.mul(&self.res.frobenius(&x.b), &self.y_frob_q),
        }
    }

    /// x^{q^i} by iterating the q-power Frobenius.
    pub fn frobenius_q_pow(&self, x: &QuadElem, i: u32) -> QuadElem {
        let mut y = x.clone();
        for _ in 0..i {
            y = self.frobenius_q(&y);
        }
        y
    }

    /// All q^{2d} elements in deterministic counting order (a-part least
    /// significant).
    pub fn elements(&self) -> Vec<QuadElem> {
        let res_elems = self.res.elements();
        let mut out = Vec::with_capacity(res_elems.len() * res_elems.len());
        for b in &res_elems {
            for a in &res_elems {
                out.push(QuadElem { a: a.clone(), b: b.clone() });
            }
        }
        out
    }
}

impl CoeffField for QuadField {
    type Elem = QuadElem;

    fn zero(&self) -> QuadElem {
        QuadElem { a: Poly::zero(), b: Poly::zero() }
    }
    fn one(&self) -> QuadElem {
        QuadElem { a: Poly::one(), b: Poly::zero() }
    }
    fn is_zero(&self, x: &QuadElem) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem { a: self.res.add(&x.a, &y.a), b: self.res.add(&x.b, &y.b) }
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem { a: self.res.sub(&x.a, &y.a), b: self.res.sub(&x.b, &y.b) }
    }
    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem { a: self.res.neg(&x.a), b: self.res.neg(&x.b) }
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        // (a1 + b1Y)(a2 + b2Y) = a1a2 + ν·b1b2 + (a1b2 + a2b1)Y
        let a = self.res.add(
            &self.res.mul(&x.a, &y.a),
            &self.res.mul(&self.nr, &self.res.mul(&x.b, &y.b)),
        );
        let b = self.res.add(&self.res.mul(&x.a, &y.b), &self.res.mul(&x.b, &y.a));
        QuadElem { a, b }
    }
    fn inv(&self, x: &QuadElem) -> Result<QuadElem> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        // Norm = a² − ν·b² ∈ A/(π), nonzero since ν is a non-residue.
        let norm = self.res.sub(
            &self.res.mul(&x.a, &x.a),
            &self.res.mul(&self.nr, &self.res.mul(&x.b, &x.b)),
        );
        let ninv = self.res.inv(&norm)?;
        Ok(QuadElem {
            a: self.res.mul(&x.a, &ninv),
            b: self.res.neg(&self.res.mul(&x.b, &ninv)),
        })
    }
    fn from_int(&self, n: i64) -> QuadElem {
        self.from_res(self.res.from_int(n))
    }
    fn from_fq(&self, c: u64) -> QuadElem {
        self.from_res(self.res.from_fq(c))
    }
    fn char_p(&self) -> u64 {
        self.res.char_p()
    }
    fn q(&self) -> u64 {
        self.res.q()
    }
    fn fmt_elem(&self, x: &QuadElem) -> String {
        match (x.a.is_zero(), x.b.is_zero()) {
            (true, true) => "0".into(),
            (false, true) => x.a.to_text(),
            (true, false) => format!("({})*Y", x.b.to_text()),
            (false, false) => format!("{} + ({})*Y", x.a.to_text(), x.b.to_text()),
        }
    }
    fn elem_needs_parens(&self, x: &QuadElem) -> bool {
        !(x.b.is_zero() && x.a.term_count() <= 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn res_ctx() -> ResField {
        let fq = Fq::new(3, 1).unwrap();
        let pi = parse_poly(&fq, "T^3 + 2*T + 1").unwrap();
        ResField::new(fq, pi).unwrap()
    }

    #[test]
    fn residue_field_rejects_bad_moduli() {
        let fq = Fq::new(3, 1).unwrap();
        let red = parse_poly(&fq, "T^3 + 2*T^2").unwrap();
        assert!(matches!(ResField::new(fq.clone(), red), Err(Error::Reducible)));
        let nonmonic = parse_poly(&fq, "2*T^2 + 2").unwrap();
        assert!(matches!(ResField::new(fq, nonmonic), Err(Error::NotMonic)));
    }

    #[test]
    fn residue_field_inverses() {
        let rf = res_ctx();
        for a in rf.elements() {
            if a.is_zero() {
                assert!(rf.inv(&a).is_err());
                continue;
            }
            let inv = rf.inv(&a).unwrap();
            assert!(rf.is_one(&rf.mul(&a, &inv)), "a = {}", a.to_text());
        }
    }

    #[test]
    fn reduce_rat_integrality() {
        let rf = res_ctx();
        let fq = rf.fq.clone();
        let pi = rf.pi().clone();
        // 1/π is not integral at π.
        let bad = Rat::new(&fq, Poly::one(), pi.clone()).unwrap();
        assert!(matches!(rf.reduce_rat(&bad), Err(Error::NotIntegralAtPi(_))));
        // π/(T+1) reduces to 0.
        let good = Rat::new(&fq, pi, parse_poly(&fq, "T + 1").unwrap()).unwrap();
        assert!(rf.reduce_rat(&good).unwrap().is_zero());
        // (T+1)/(T+2) reduces to (T̄+1)·(T̄+2)⁻¹.
        let r = Rat::new(
            &fq,
            parse_poly(&fq, "T + 1").unwrap(),
            parse_poly(&fq, "T + 2").unwrap(),
        )
        .unwrap();
        let red = rf.reduce_rat(&r).unwrap();
        let back = rf.mul(&red, &parse_poly(&fq, "T + 2").unwrap());
        assert_eq!(back, parse_poly(&fq, "T + 1").unwrap());
    }

    #[test]
    fn frobenius_fixes_prime_field_and_permutes() {
        let rf = res_ctx();
        assert!(rf.is_one(&rf.frobenius(&Poly::one())));
        // Frobenius is the identity exactly on F_q ⊂ A/(π).
        let fixed: Vec<Poly> = rf
            .elements()
            .into_iter()
            .filter(|a| rf.frobenius(a) == *a)
            .collect();
        assert_eq!(fixed.len(), 3);
    }

    #[test]
    fn quad_field_is_a_field() {
        let qf = QuadField::new(res_ctx()).unwrap();
        // ν really is a non-residue: no square root among residue elements.
        for a in qf.res.elements() {
            assert_ne!(qf.res.mul(&a, &a), *qf.non_residue());
        }
        // Inverses across a sample.
        let y = QuadElem { a: Poly::zero(), b: Poly::one() };
        let t = qf.from_res(qf.res.t_bar());
        let sample = [y.clone(), t.clone(), qf.add(&y, &t), qf.mul(&y, &t)];
        for x in &sample {
            let inv = qf.inv(x).unwrap();
            assert_eq!(qf.mul(x, &inv), qf.one());
        }
        // Y² = ν.
        assert_eq!(qf.mul(&y, &y), qf.from_res(qf.non_residue().clone()));
    }

    #[test]
    fn quad_frobenius_order_two_over_ground_field() {
        let qf = QuadField::new(res_ctx()).unwrap();
        let d = qf.res.d() as u32;
        let y = QuadElem { a: Poly::zero(), b: Poly::one() };
        let t = qf.from_res(qf.res.t_bar());
        let x = qf.add(&qf.mul(&y, &t), &qf.one());
        // x^{q^d} fixes A/(π) pointwise and negates Y; applying it twice is
        // the identity on F_{q^{2d}}.
        let fr = qf.frobenius_q_pow(&x, d);
        assert_ne!(fr, x);
        assert_eq!(qf.frobenius_q_pow(&fr, d), x);
        // Frobenius agrees with the power map.
        assert_eq!(qf.frobenius_q(&x), qf.pow_u64(&x, qf.q()));
    }
}
