//! Truncated power series in the parameter u over a coefficient field.
//!
//! A [`Series`] stores exactly `prec` coefficients c_0..c_{prec−1} and means
//! "this series, known modulo u^prec". Precision propagates through every
//! operation:
//!
//! * add/sub: min of the operand precisions;
//! * mul: min(ord(a) + prec(b), ord(b) + prec(a), prec(a) + prec(b)) — the
//!   plain min when both operands are units, better when leading zeros
//!   shift the first unknown coefficient outward;
//! * invert/division: exact at the precision the data supports, with
//!   [`Error::PrecisionExhausted`] when that is not enough.
//!
//! Equality compares the overlap: two series are equal when they agree on
//! the first min(prec) coefficients. All convolution loops skip zero
//! coefficients on both sides, so sparse series (the Carlitz exponential,
//! the ρ_a reciprocals) cost what their support costs, not what their
//! precision costs.

use crate::coeff::{CoeffField, KField, ResField};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// A truncated power series; `coeffs.len() == prec` always.
#[derive(Clone, Debug)]
pub struct Series<F: CoeffField> {
    coeffs: Vec<F::Elem>,
    prec: usize,
}

/// Series over K.
pub type KSeries = Series<KField>;
/// Series over a residue field A/(π).
pub type ResSeries = Series<ResField>;

impl<F: CoeffField> Series<F> {
    /// The zero series at the given precision.
    pub fn zero(f: &F, prec: usize) -> Series<F> {
        Series { coeffs: vec![f.zero(); prec], prec }
    }

    /// The constant 1 at the given precision.
    pub fn one(f: &F, prec: usize) -> Series<F> {
        let mut s = Series::zero(f, prec);
        if prec > 0 {
            s.coeffs[0] = f.one();
        }
        s
    }

    /// c·u^i at the given precision (i ≥ prec yields the zero series: the
    /// monomial is beyond the window).
    pub fn monomial(f: &F, i: usize, c: F::Elem, prec: usize) -> Series<F> {
        let mut s = Series::zero(f, prec);
        if i < prec {
            s.coeffs[i] = c;
        }
        s
    }

    /// From explicit coefficients, padded or cut to `prec`.
    pub fn from_coeffs(f: &F, mut coeffs: Vec<F::Elem>, prec: usize) -> Series<F> {
        coeffs.resize(prec, f.zero());
        Series { coeffs, prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Coefficient of u^i; panics beyond the precision window (that would be
    /// reading unknown data).
    pub fn coeff(&self, i: usize) -> &F::Elem {
        assert!(i < self.prec, "coefficient index {i} beyond precision {}", self.prec);
        &self.coeffs[i]
    }

    /// All stored coefficients.
    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    /// Overwrite one coefficient (builder-style; stays within the window).
    pub fn set_coeff(&mut self, i: usize, c: F::Elem) {
        assert!(i < self.prec);
        self.coeffs[i] = c;
    }

    /// Least index with a nonzero stored coefficient; None when all stored
    /// coefficients vanish (the series is 0 modulo u^prec).
    pub fn ord(&self, f: &F) -> Option<usize> {
        self.coeffs.iter().position(|c| !f.is_zero(c))
    }

    /// ord for precision bookkeeping: the order, or prec for a zero window.
    fn ord_or_prec(&self, f: &F) -> usize {
        self.ord(f).unwrap_or(self.prec)
    }

    /// True when every stored coefficient vanishes.
    pub fn is_zero(&self, f: &F) -> bool {
        self.ord(f).is_none()
    }

    /// Equality on the overlap: agree on the first min(prec) coefficients.
    pub fn eq_series(&self, f: &F, rhs: &Series<F>) -> bool {
        let n = self.prec.min(rhs.prec);
        (0..n).all(|i| {
            // Compare via subtraction so non-canonical elements cannot slip
            // through a structural mismatch — elements are canonical, but
            // this keeps equality semantic by construction.
            f.is_zero(&f.sub(&self.coeffs[i], &rhs.coeffs[i]))
        })
    }

    /// Cut to a smaller precision (no-op if already smaller).
    pub fn truncate(&self, n: usize) -> Series<F> {
        if n >= self.prec {
            return self.clone();
        }
        Series { coeffs: self.coeffs[..n].to_vec(), prec: n }
    }

    pub fn add(&self, f: &F, rhs: &Series<F>) -> Series<F> {
        let n = self.prec.min(rhs.prec);
        let coeffs = (0..n).map(|i| f.add(&self.coeffs[i], &rhs.coeffs[i])).collect();
        Series { coeffs, prec: n }
    }

    pub fn sub(&self, f: &F, rhs: &Series<F>) -> Series<F> {
        let n = self.prec.min(rhs.prec);
        let coeffs = (0..n).map(|i| f.sub(&self.coeffs[i], &rhs.coeffs[i])).collect();
        Series { coeffs, prec: n }
    }

    pub fn neg(&self, f: &F) -> Series<F> {
        Series { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(), prec: self.prec }
    }

    pub fn scalar_mul(&self, f: &F, c: &F::Elem) -> Series<F> {
        if f.is_one(c) {
            return self.clone();
        }
        Series {
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
            prec: self.prec,
        }
    }

    /// Product, precision min(ord(a)+prec(b), ord(b)+prec(a), prec(a)+prec(b)).
    /// Skips zero coefficients on both sides.
    pub fn mul(&self, f: &F, rhs: &Series<F>) -> Series<F> {
        let oa = self.ord_or_prec(f);
        let ob = rhs.ord_or_prec(f);
        let prec = (oa + rhs.prec).min(ob + self.prec).min(self.prec + rhs.prec);
        let mut out = Series::zero(f, prec);
        let nza: Vec<usize> = (oa..self.prec).filter(|&i| !f.is_zero(&self.coeffs[i])).collect();
        let nzb: Vec<usize> = (ob..rhs.prec).filter(|&j| !f.is_zero(&rhs.coeffs[j])).collect();
        for &i in &nza {
            if i + ob >= prec {
                break;
            }
            for &j in &nzb {
                if i + j >= prec {
                    break;
                }
                let t = f.mul(&self.coeffs[i], &rhs.coeffs[j]);
                out.coeffs[i + j] = f.add(&out.coeffs[i + j], &t);
            }
        }
        out
    }

    /// Multiply by u^m (exact, precision grows by m).
    pub fn shift_up(&self, f: &F, m: usize) -> Series<F> {
        let mut coeffs = vec![f.zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs, prec: self.prec + m }
    }

    /// Reciprocal of a unit series (c_0 ≠ 0) at the same precision:
    /// c'_0 = c_0⁻¹, c'_n = −c_0⁻¹ · Σ_{k≥1} c_k·c'_{n−k}. The inner sum
    /// skips the zero coefficients of self, so a sparse series inverts in
    /// O(prec · support).
    pub fn invert(&self, f: &F) -> Result<Series<F>> {
        if self.prec == 0 {
            return Ok(self.clone());
        }
        if f.is_zero(&self.coeffs[0]) {
            return Err(Error::NonUnitSeries);
        }
        let c0_inv = f.inv(&self.coeffs[0])?;
        let nz: Vec<usize> = (1..self.prec).filter(|&k| !f.is_zero(&self.coeffs[k])).collect();
        let mut out = Vec::with_capacity(self.prec);
        out.push(c0_inv.clone());
        for n in 1..self.prec {
            let mut acc = f.zero();
            for &k in &nz {
                if k > n {
                    break;
                }
                acc = f.add(&acc, &f.mul(&self.coeffs[k], &out[n - k]));
            }
            out.push(f.neg(&f.mul(&c0_inv, &acc)));
        }
        Ok(Series { coeffs: out, prec: self.prec })
    }

    /// n-th power by binary exponentiation. Powers of a unit keep the
    /// precision; powers of a non-unit gain precision from the shift rule
    /// exactly as iterated `mul` dictates.
    pub fn pow(&self, f: &F, n: u64) -> Series<F> {
        let mut acc = Series::one(f, self.prec);
        if n == 0 {
            return acc;
        }
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Exact division self / rhs, defined when ord(rhs) ≤ ord(self) …
    /// i.e. rhs = u^m·(unit); the quotient is known modulo
    /// u^{min(prec) − m}. Errors: rhs zero at its precision
    /// (PrecisionExhausted — cannot even see its leading term), or division
    /// that is not exact at the visible precision.
    pub fn div_exact(&self, f: &F, rhs: &Series<F>) -> Result<Series<F>> {
        let m = rhs.ord(f).ok_or(Error::PrecisionExhausted {
            needed: rhs.prec + 1,
            available: rhs.prec,
        })?;
        let prec_out = self
            .prec
            .min(rhs.prec)
            .checked_sub(m)
            .filter(|&p| p > 0)
            .ok_or(Error::PrecisionExhausted { needed: m + 1, available: self.prec.min(rhs.prec) })?;
        // Check the dividend actually vanishes to order m.
        for i in 0..m.min(self.prec) {
            if !f.is_zero(&self.coeffs[i]) {
                return Err(Error::InternalInconsistency(
                    "inexact series division: dividend order below divisor order".into(),
                ));
            }
        }
        let unit = Series {
            coeffs: rhs.coeffs[m..].to_vec(),
            prec: rhs.prec - m,
        };
        let shifted = Series {
            coeffs: self.coeffs[m.min(self.prec)..].to_vec(),
            prec: self.prec - m.min(self.prec),
        };
        Ok(shifted.truncate(prec_out).mul(f, &unit.invert(f)?).truncate(prec_out))
    }

    /// Map coefficients into another field (used for reduction mod π). The
    /// field argument only anchors the output type.
    pub fn map_coeffs<G: CoeffField>(
        &self,
        _target: &G,
        mut map: impl FnMut(&F::Elem) -> Result<G::Elem>,
    ) -> Result<Series<G>> {
        let mut coeffs = Vec::with_capacity(self.prec);
        for c in &self.coeffs {
            coeffs.push(map(c)?);
        }
        Ok(Series { coeffs, prec: self.prec })
    }

    /// Text form `c0 + c1*u + c2*u^2 + … + O(u^N)`; zero coefficients are
    /// skipped; multi-term coefficients are parenthesized; the all-zero
    /// window prints `0 + O(u^N)`.
    pub fn to_text(&self, f: &F) -> String {
        self.to_text_var(f, "u")
    }

    /// Same, with a caller-chosen variable name.
    pub fn to_text_var(&self, f: &F, var: &str) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.fmt_elem(c);
            let coeff_part = if f.elem_needs_parens(c) { format!("({cs})") } else { cs };
            let part = match i {
                0 => coeff_part,
                _ => {
                    let upow = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    if f.is_one(c) {
                        upow
                    } else {
                        format!("{coeff_part}*{upow}")
                    }
                }
            };
            parts.push(part);
        }
        if parts.is_empty() {
            parts.push("0".to_string());
        }
        format!("{} + O({}^{})", parts.join(" + "), var, self.prec)
    }
}

/// Parse the K-coefficient series text format produced by
/// [`Series::to_text`]: terms `coeff`, `coeff*u^k`, `u^k`, joined by ` + `,
/// with a trailing `O(u^N)` setting the precision. Coefficients are in the
/// rational-function format, parenthesized when they contain a top-level
/// `+`.
pub fn parse_k_series(kf: &KField, s: &str) -> Result<KSeries> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    // Split into top-level '+'-separated chunks (depth-0 only).
    let mut chunks = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, ch) in compact.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                chunks.push(&compact[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    chunks.push(&compact[start..]);
    let mut prec: Option<usize> = None;
    let mut terms: Vec<(usize, Rat)> = Vec::new();
    for chunk in chunks {
        if chunk.is_empty() {
            return Err(Error::Parse("empty series term".into()));
        }
        if let Some(rest) = chunk.strip_prefix("O(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse("unterminated O(...)".into()))?;
            let n: usize = match inner.strip_prefix("u^") {
                Some(e) => e.parse().map_err(|_| Error::Parse("bad O(u^N)".into()))?,
                None if inner == "u" => 1,
                None => return Err(Error::Parse(format!("bad precision marker O({inner})"))),
            };
            prec = Some(n);
            continue;
        }
        // coeff [* u[^k]] | u[^k]
        let (coeff_str, upart) = match chunk.find("*u") {
            Some(i) if depth_zero_at(chunk, i) => (&chunk[..i], &chunk[i + 1..]),
            _ => {
                if chunk.starts_with('u')
                    && (chunk.len() == 1 || chunk.as_bytes()[1] == b'^')
                {
                    ("1", chunk)
                } else {
                    (chunk, "")
                }
            }
        };
        let exp: usize = if upart.is_empty() {
            0
        } else if upart == "u" {
            1
        } else {
            upart
                .strip_prefix("u^")
                .ok_or_else(|| Error::Parse(format!("bad u-power '{upart}'")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad u-exponent in '{upart}'")))?
        };
        let mut cs = coeff_str;
        if cs.len() >= 2 && cs.starts_with('(') && cs.ends_with(')') {
            cs = &cs[1..cs.len() - 1];
        }
        let coeff = crate::rat::parse_rat(&kf.fq, cs)?;
        terms.push((exp, coeff));
    }
    let prec = prec.ok_or_else(|| Error::Parse("series missing O(u^N) precision marker".into()))?;
    let mut out = Series::zero(kf, prec);
    for (e, c) in terms {
        if e >= prec {
            return Err(Error::Parse(format!("term u^{e} at or beyond precision {prec}")));
        }
        let cur = kf.add(out.coeff(e), &c);
        out.set_coeff(e, cur);
    }
    Ok(out)
}

fn depth_zero_at(s: &str, pos: usize) -> bool {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        if i == pos {
            return depth == 0;
        }
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::poly::parse_poly;
    use crate::rat::parse_rat;

    fn kf() -> KField {
        KField::new(Fq::new(3, 1).unwrap())
    }

    fn s(kf: &KField, text: &str) -> KSeries {
        parse_k_series(kf, text).unwrap()
    }

    #[test]
    fn mul_pinned() {
        let kf = kf();
        let a = s(&kf, "1 + T*u + O(u^3)");
        let b = s(&kf, "1 + 2*T*u + O(u^3)");
        // (1 + Tu)(1 − Tu) = 1 − T²u².
        let prod = a.mul(&kf, &b);
        assert_eq!(prod.to_text(&kf), "1 + 2*T^2*u^2 + O(u^3)");
    }

    #[test]
    fn invert_geometric() {
        let kf = kf();
        // invert(1 + Tu²) = 1 − Tu² + T²u⁴ − … over F_3(T).
        let a = s(&kf, "1 + T*u^2 + O(u^6)");
        let inv = a.invert(&kf).unwrap();
        assert_eq!(inv.to_text(&kf), "1 + 2*T*u^2 + T^2*u^4 + O(u^6)");
        let back = a.mul(&kf, &inv);
        assert!(back.eq_series(&kf, &KSeries::one(&kf, 6)));
    }

    #[test]
    fn invert_requires_unit() {
        let kf = kf();
        let a = s(&kf, "T*u + O(u^4)");
        assert!(matches!(a.invert(&kf), Err(Error::NonUnitSeries)));
    }

    #[test]
    fn precision_rules() {
        let kf = kf();
        let a = s(&kf, "1 + u + O(u^5)");
        let b = s(&kf, "1 + u + O(u^7)");
        assert_eq!(a.add(&kf, &b).prec(), 5);
        assert_eq!(a.mul(&kf, &b).prec(), 5);
        // The unknown tail of a factor is shifted by the *other* factor's
        // order: (u³ + O(u⁵))·(1 + u + O(u⁷)) still has an unknown u⁵ term,
        // but (u³ + O(u⁵))² is known through u⁷ (error at u^{3+5}).
        let c = s(&kf, "u^3 + O(u^5)");
        assert_eq!(c.mul(&kf, &b).prec(), 5);
        assert_eq!(c.mul(&kf, &c).prec(), 8);
        // Shift is exact.
        assert_eq!(a.shift_up(&kf, 3).prec(), 8);
        assert_eq!(a.truncate(2).prec(), 2);
    }

    #[test]
    fn equality_is_on_the_overlap() {
        let kf = kf();
        let a = s(&kf, "1 + u + O(u^3)");
        let b = s(&kf, "1 + u + u^4 + O(u^6)");
        assert!(a.eq_series(&kf, &b));
        let c = s(&kf, "1 + 2*u + O(u^3)");
        assert!(!a.eq_series(&kf, &c));
    }

    #[test]
    fn pow_and_ord() {
        let kf = kf();
        let a = s(&kf, "u + u^2 + O(u^8)");
        assert_eq!(a.ord(&kf), Some(1));
        let cube = a.pow(&kf, 3);
        // Frobenius in characteristic 3: (u + u²)³ = u³ + u⁶; the cube of a
        // series of order 1 known mod u^8 is known mod u^10.
        assert_eq!(cube.to_text(&kf), "u^3 + u^6 + O(u^10)");
        assert_eq!(KSeries::zero(&kf, 4).ord(&kf), None);
        assert_eq!(a.pow(&kf, 0).to_text(&kf), "1 + O(u^8)");
    }

    #[test]
    fn div_exact_round_trip() {
        let kf = kf();
        let a = s(&kf, "u^2 + T*u^3 + O(u^9)");
        let b = s(&kf, "u + 2*u^2 + O(u^9)");
        let q = a.div_exact(&kf, &b).unwrap();
        assert_eq!(q.prec(), 8);
        assert!(q.mul(&kf, &b).eq_series(&kf, &a));
        // Dividing by a window of zeros is precision exhaustion.
        let z = KSeries::zero(&kf, 4);
        assert!(matches!(
            a.div_exact(&kf, &z),
            Err(Error::PrecisionExhausted { .. })
        ));
        // Inexact division (dividend order below divisor order) is loud.
        let c = s(&kf, "1 + u + O(u^5)");
        let d = s(&kf, "u + O(u^5)");
        assert!(c.div_exact(&kf, &d).is_err());
    }

    #[test]
    fn text_round_trip() {
        let kf = kf();
        for text in [
            "1 + (2*T^3 + T)*u^2 + O(u^6)",
            "u^3 + 2*T*u^5 + T^2*u^7 + O(u^8)",
            "0 + O(u^4)",
            "2*u + O(u^3)",
            "(1/(T + 1))*u^2 + (T/(T^2 + 1))*u^3 + O(u^5)",
        ] {
            let series = parse_k_series(&kf, text).unwrap();
            assert_eq!(series.to_text(&kf), text, "round trip of '{text}'");
        }
        // Coefficient sanity on one of them.
        let e = parse_k_series(&kf, "1 + (2*T^3 + T)*u^2 + O(u^6)").unwrap();
        assert_eq!(e.coeff(2), &parse_rat(&kf.fq, "2*T^3 + T").unwrap());
        assert_eq!(e.prec(), 6);
    }

    #[test]
    fn map_coeffs_reduces() {
        let kf = kf();
        let fq = kf.fq.clone();
        let rf = crate::coeff::ResField::new(fq.clone(), parse_poly(&fq, "T^2 + 1").unwrap()).unwrap();
        let a = s(&kf, "T^2 + T*u + O(u^3)");
        let red: ResSeries = a.map_coeffs(&rf, |c| rf.reduce_rat(c)).unwrap();
        // T² ≡ −1 ≡ 2 mod T²+1.
        assert_eq!(red.to_text(&rf), "2 + T*u + O(u^3)");
    }
}
