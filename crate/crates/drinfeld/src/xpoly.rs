//! Dense univariate polynomials in `x` over any coefficient field —
//! companion polynomials P(f, x), supersingular polynomials S(x), Goss
//! polynomials in `t`. Canonically trimmed (no zero leading coefficient);
//! the zero polynomial has an empty coefficient vector.

use crate::coeff::CoeffField;
use crate::error::{Error, Result};

/// A polynomial Σ c_i·x^i, little-endian, canonical.
#[derive(Clone, Debug)]
pub struct XPoly<F: CoeffField> {
    coeffs: Vec<F::Elem>,
}

impl<F: CoeffField> PartialEq for XPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: CoeffField> XPoly<F> {
    pub fn zero() -> XPoly<F> {
        XPoly { coeffs: Vec::new() }
    }

    pub fn one(f: &F) -> XPoly<F> {
        XPoly { coeffs: vec![f.one()] }
    }

    pub fn x(f: &F) -> XPoly<F> {
        XPoly { coeffs: vec![f.zero(), f.one()] }
    }

    /// c·x^n.
    pub fn monomial(f: &F, n: usize, c: F::Elem) -> XPoly<F> {
        if f.is_zero(&c) {
            return XPoly::zero();
        }
        let mut coeffs = vec![f.zero(); n + 1];
        coeffs[n] = c;
        XPoly { coeffs }
    }

    pub fn from_coeffs(f: &F, mut coeffs: Vec<F::Elem>) -> XPoly<F> {
        while coeffs.last().map(|c| f.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        XPoly { coeffs }
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

    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, f: &F) -> bool {
        self.leading().map(|c| f.is_one(c)).unwrap_or(false)
    }

    pub fn add(&self, f: &F, rhs: &XPoly<F>) -> XPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(&self.coeff(f, i), &rhs.coeff(f, i)))
            .collect();
        XPoly::from_coeffs(f, coeffs)
    }

    pub fn sub(&self, f: &F, rhs: &XPoly<F>) -> XPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(&self.coeff(f, i), &rhs.coeff(f, i)))
            .collect();
        XPoly::from_coeffs(f, coeffs)
    }

    pub fn neg(&self, f: &F) -> XPoly<F> {
        XPoly { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn scalar_mul(&self, f: &F, c: &F::Elem) -> XPoly<F> {
        if f.is_zero(c) {
            return XPoly::zero();
        }
        XPoly { coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect() }
    }

    pub fn mul(&self, f: &F, rhs: &XPoly<F>) -> XPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return XPoly::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        XPoly { coeffs: out }
    }

    pub fn pow(&self, f: &F, mut n: u64) -> XPoly<F> {
        let mut acc = XPoly::one(f);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Euclidean division by a nonzero divisor.
    pub fn divrem(&self, f: &F, den: &XPoly<F>) -> Result<(XPoly<F>, XPoly<F>)> {
        let dd = den.deg().ok_or(Error::DivisionByZero)?;
        if self.coeffs.len() <= dd {
            return Ok((XPoly::zero(), self.clone()));
        }
        let lead_inv = f.inv(den.leading().expect("nonzero"))?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if f.is_zero(&rem[i]) {
                continue;
            }
            let qc = f.mul(&rem[i], &lead_inv);
            for (j, m) in den.coeffs.iter().enumerate() {
                if !f.is_zero(m) {
                    rem[i - dd + j] = f.sub(&rem[i - dd + j], &f.mul(&qc, m));
                }
            }
            quot[i - dd] = qc;
        }
        Ok((XPoly::from_coeffs(f, quot), XPoly::from_coeffs(f, rem)))
    }

    /// Remainder only.
    pub fn rem(&self, f: &F, den: &XPoly<F>) -> Result<XPoly<F>> {
        Ok(self.divrem(f, den)?.1)
    }

    /// True when den divides self exactly.
    pub fn divisible_by(&self, f: &F, den: &XPoly<F>) -> Result<bool> {
        Ok(self.rem(f, den)?.is_zero())
    }

    /// Scale to leading coefficient 1 (zero unchanged).
    pub fn make_monic(&self, f: &F) -> Result<XPoly<F>> {
        match self.leading() {
            None => Ok(self.clone()),
            Some(c) if f.is_one(c) => Ok(self.clone()),
            Some(c) => {
                let inv = f.inv(c)?;
                Ok(self.scalar_mul(f, &inv))
            }
        }
    }

    /// Evaluate at a point.
    pub fn eval(&self, f: &F, x: &F::Elem) -> F::Elem {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// Text form in descending degree with explicit `*`; multi-term
    /// coefficients are parenthesized: `x^4 + (T + 1)*x^2 + 2`.
    pub fn to_text(&self, f: &F, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.fmt_elem(c);
            let coeff_part = if f.elem_needs_parens(c) { format!("({cs})") } else { cs };
            let part = match i {
                0 => coeff_part,
                _ => {
                    let xp = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    if f.is_one(c) {
                        xp
                    } else {
                        format!("{coeff_part}*{xp}")
                    }
                }
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{KField, ResField};
    use crate::field::Fq;
    use crate::poly::parse_poly;
    use crate::rat::parse_rat;

    fn kf() -> KField {
        KField::new(Fq::new(3, 1).unwrap())
    }

    #[test]
    fn arithmetic_round_trip() {
        let kf = kf();
        let a = XPoly::from_coeffs(
            &kf,
            vec![
                parse_rat(&kf.fq, "T").unwrap(),
                parse_rat(&kf.fq, "1").unwrap(),
                parse_rat(&kf.fq, "2*T + 1").unwrap(),
            ],
        );
        let b = XPoly::from_coeffs(
            &kf,
            vec![parse_rat(&kf.fq, "T + 1").unwrap(), parse_rat(&kf.fq, "1").unwrap()],
        );
        let prod = a.mul(&kf, &b);
        let (q, r) = prod.divrem(&kf, &b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, a);
        assert!(prod.divisible_by(&kf, &b).unwrap());
        assert!(!prod.add(&kf, &XPoly::one(&kf)).divisible_by(&kf, &b).unwrap());
    }

    #[test]
    fn formatting() {
        let kf = kf();
        let p = XPoly::from_coeffs(
            &kf,
            vec![
                parse_rat(&kf.fq, "2").unwrap(),
                parse_rat(&kf.fq, "T + 1").unwrap(),
                parse_rat(&kf.fq, "0").unwrap(),
                parse_rat(&kf.fq, "1").unwrap(),
            ],
        );
        assert_eq!(p.to_text(&kf, "x"), "x^3 + (T + 1)*x + 2");
        assert_eq!(XPoly::<KField>::zero().to_text(&kf, "x"), "0");
    }

    #[test]
    fn monic_normalization_over_residue_field() {
        use crate::poly::Poly;
        let fq = Fq::new(3, 1).unwrap();
        let rf = ResField::new(fq.clone(), parse_poly(&fq, "T^2 + 1").unwrap()).unwrap();
        // Coefficients [T̄, 2]: leading 2, monic form scales by 2⁻¹ = 2.
        let p = XPoly::from_coeffs(&rf, vec![parse_poly(&fq, "T").unwrap(), Poly::constant(2)]);
        let m = p.make_monic(&rf).unwrap();
        assert!(m.is_monic(&rf));
        assert_eq!(m.coeff(&rf, 0), parse_poly(&fq, "2*T").unwrap());
    }

    #[test]
    fn eval_horner() {
        let kf = kf();
        let p = XPoly::from_coeffs(
            &kf,
            vec![
                parse_rat(&kf.fq, "1").unwrap(),
                parse_rat(&kf.fq, "0").unwrap(),
                parse_rat(&kf.fq, "1").unwrap(),
            ],
        );
        // x² + 1 at x = T: T² + 1.
        let v = p.eval(&kf, &parse_rat(&kf.fq, "T").unwrap());
        assert_eq!(v, parse_rat(&kf.fq, "T^2 + 1").unwrap());
    }
}
