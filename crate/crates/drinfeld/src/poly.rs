//! The polynomial ring A = F_q[T].
//!
//! [`Poly`] stores packed F_q coefficients little-endian (index = degree),
//! canonically trimmed: no trailing zeros, the zero polynomial is the empty
//! vector. All operations take the field context explicitly.
//!
//! Provides the arithmetic of A (including gcd, exact division, modular
//! powers), Rabin irreducibility testing, deterministic enumeration of monic
//! irreducibles, the brackets [i] = T^{q^i} − T, the factorials
//! d_i = [i]·d_{i−1}^q of the Carlitz theory, and the canonical text format
//! `2*T^3 + T + 1` (descending degree, explicit `*`, coefficients as packed
//! integers).

use crate::error::{Error, Result};
use crate::field::Fq;

/// A dense univariate polynomial over F_q; the variable prints as `T`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly(Vec<u64>);

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    /// The constant 1.
    pub fn one() -> Poly {
        Poly(vec![1])
    }

    /// The variable T.
    pub fn t() -> Poly {
        Poly(vec![0, 1])
    }

    /// A constant polynomial (canonicalized).
    pub fn constant(c: u64) -> Poly {
        if c == 0 {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    /// T^n.
    pub fn t_pow(n: usize) -> Poly {
        let mut v = vec![0u64; n + 1];
        v[n] = 1;
        Poly(v)
    }

    /// From little-endian coefficients; trims trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    /// Little-endian coefficient slice (canonical, no trailing zeros).
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    /// Coefficient of T^i (0 beyond the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    /// Degree, or None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree as i64 with deg(0) = −1 (handy for valuation arithmetic).
    pub fn deg_i64(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    /// Leading coefficient (0 for the zero polynomial).
    pub fn leading(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, fq: &Fq, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(fq.add(self.coeff(i), rhs.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, fq: &Fq, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(fq.sub(self.coeff(i), rhs.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self, fq: &Fq) -> Poly {
        Poly(self.0.iter().map(|&c| fq.neg(c)).collect())
    }

    pub fn scalar_mul(&self, fq: &Fq, c: u64) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly::from_coeffs(self.0.iter().map(|&a| fq.mul(a, c)).collect())
    }

    pub fn mul(&self, fq: &Fq, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let (a, b) = (&self.0, &rhs.0);
        let mut out = vec![0u64; a.len() + b.len() - 1];
        if fq.e() == 1 {
            // Delayed-reduction word arithmetic: values are < p ≤ 1000, so
            // products are < 10^6 and even the longest convolutions here stay
            // far below u64 overflow. One reduction at the end.
            let p = fq.p();
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            for c in out.iter_mut() {
                *c %= p;
            }
        } else {
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    if y != 0 {
                        out[i + j] = fq.add(out[i + j], fq.mul(x, y));
                    }
                }
            }
        }
        Poly::from_coeffs(out)
    }

    /// Frobenius power f^q: in characteristic p, (Σ c_j T^j)^q = Σ c_j^q T^{jq}.
    pub fn pow_frobenius(&self, fq: &Fq) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let q = fq.q() as usize;
        let mut out = vec![0u64; (self.0.len() - 1) * q + 1];
        for (j, &c) in self.0.iter().enumerate() {
            if c != 0 {
                out[j * q] = fq.pow(c, fq.q());
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, fq: &Fq, mut n: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(fq, &base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(fq, &base);
            }
        }
        acc
    }

    /// Euclidean division: self = q·den + r with deg r < deg den.
    pub fn divrem(&self, fq: &Fq, den: &Poly) -> Result<(Poly, Poly)> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = den.deg().unwrap();
        if self.0.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = fq.inv(den.leading())?;
        let mut rem = self.0.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let qc = fq.mul(c, lead_inv);
            quot[i - dd] = qc;
            for (j, &m) in den.0.iter().enumerate() {
                if m != 0 {
                    rem[i - dd + j] = fq.sub(rem[i - dd + j], fq.mul(qc, m));
                }
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Remainder of division by `den`.
    pub fn rem(&self, fq: &Fq, den: &Poly) -> Result<Poly> {
        Ok(self.divrem(fq, den)?.1)
    }

    /// Exact quotient; error if the division leaves a remainder.
    pub fn div_exact(&self, fq: &Fq, den: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(fq, den)?;
        if !r.is_zero() {
            return Err(Error::InternalInconsistency(
                "inexact polynomial division".into(),
            ));
        }
        Ok(q)
    }

    /// Monic gcd (gcd(0, 0) = 0).
    pub fn gcd(&self, fq: &Fq, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(fq, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic(fq)
    }

    /// Extended gcd: returns (g, s, t) with g monic and s·self + t·rhs = g.
    pub fn egcd(&self, fq: &Fq, rhs: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(fq, &r1).expect("nonzero divisor");
            let s = s0.sub(fq, &q.mul(fq, &s1));
            let t = t0.sub(fq, &q.mul(fq, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = fq.inv(r0.leading()).expect("nonzero leading");
        (r0.scalar_mul(fq, c), s0.scalar_mul(fq, c), t0.scalar_mul(fq, c))
    }

    /// Scale to leading coefficient 1 (zero stays zero).
    pub fn make_monic(&self, fq: &Fq) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let c = fq.inv(self.leading()).expect("nonzero leading coefficient");
        self.scalar_mul(fq, c)
    }

    /// Evaluate at a field element.
    pub fn eval(&self, fq: &Fq, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.0.iter().rev() {
            acc = fq.add(fq.mul(acc, x), c);
        }
        acc
    }

    /// self^n modulo `m`.
    pub fn pow_mod(&self, fq: &Fq, mut n: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(fq, m)?;
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(fq, &base).rem(fq, m)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(fq, &base).rem(fq, m)?;
            }
        }
        Ok(acc)
    }

    /// Rabin's irreducibility test for a polynomial of degree ≥ 1
    /// (constants and zero are not irreducible). Requires: f monic is *not*
    /// required — content does not affect irreducibility over a field.
    pub fn is_irreducible(&self, fq: &Fq) -> bool {
        let d = match self.deg() {
            None | Some(0) => return false,
            Some(d) => d,
        };
        let f = self.make_monic(fq);
        // x^{q^k} mod f, iterated: y_{k+1} = y_k^q mod f.
        let frob_tower = |k: usize| -> Poly {
            let mut y = Poly::t();
            for _ in 0..k {
                y = y.pow_mod(fq, fq.q(), &f).expect("modulus nonzero");
            }
            y
        };
        // x^{q^d} ≡ x (mod f) ...
        let top = frob_tower(d);
        if top != Poly::t().rem(fq, &f).expect("modulus nonzero") {
            return false;
        }
        // ... and gcd(x^{q^{d/r}} − x, f) = 1 for every prime r | d.
        let mut m = d;
        let mut primes = Vec::new();
        let mut r = 2;
        while r * r <= m {
            if m % r == 0 {
                primes.push(r);
                while m % r == 0 {
                    m /= r;
                }
            }
            r += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        for r in primes {
            let y = frob_tower(d / r);
            let diff = y.sub(fq, &Poly::t());
            if !diff.gcd(fq, &f).is_one() {
                return false;
            }
        }
        true
    }

    /// Canonical text: descending degree, explicit `*`, packed-integer
    /// coefficients, e.g. `2*T^3 + T + 1`; zero prints `0`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "T".to_string(),
                (1, c) => format!("{c}*T"),
                (i, 1) => format!("T^{i}"),
                (i, c) => format!("{c}*T^{i}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }

    /// Number of terms (nonzero coefficients).
    pub fn term_count(&self) -> usize {
        self.0.iter().filter(|&&c| c != 0).count()
    }
}

/// The bracket [i] = T^{q^i} − T, i ≥ 1.
pub fn bracket(fq: &Fq, i: u32) -> Result<Poly> {
    if i == 0 {
        return Err(Error::InvalidArgument("bracket index must be >= 1".into()));
    }
    let qi = (fq.q() as u128).pow(i);
    if qi > 1 << 26 {
        return Err(Error::InvalidArgument(format!("bracket degree q^{i} too large")));
    }
    let mut v = vec![0u64; qi as usize + 1];
    v[1] = fq.neg_one();
    v[qi as usize] = 1;
    Ok(Poly::from_coeffs(v))
}

/// The Carlitz factorial d_i: d_0 = 1, d_i = [i]·d_{i−1}^q
/// (equivalently [1]^{q^{i−1}}·[2]^{q^{i−2}}·…·[i]); the product of all monic
/// polynomials of degree i.
pub fn d_factorial(fq: &Fq, i: u32) -> Result<Poly> {
    let mut d = Poly::one();
    for j in 1..=i {
        d = bracket(fq, j)?.mul(fq, &d.pow_frobenius(fq));
    }
    Ok(d)
}

/// All monic polynomials of degree d, enumerated deterministically in
/// lexicographic coefficient order: tuples (c_{d−1}, …, c_0) ascending,
/// i.e. counting order with the highest non-leading coefficient most
/// significant.
pub fn monic_polys(fq: &Fq, d: u32) -> Vec<Poly> {
    let q = fq.q();
    let mut bound: u64 = 1;
    for _ in 0..d {
        bound = bound.saturating_mul(q);
    }
    let mut out = Vec::with_capacity(bound as usize);
    for v in 0..bound {
        let mut coeffs = vec![0u64; d as usize + 1];
        let mut rest = v;
        for c in coeffs.iter_mut().take(d as usize) {
            *c = rest % q;
            rest /= q;
        }
        coeffs[d as usize] = 1;
        out.push(Poly::from_coeffs(coeffs));
    }
    out
}

/// All monic irreducibles of degree d, in the same deterministic order as
/// [`monic_polys`].
pub fn monic_irreducibles(fq: &Fq, d: u32) -> Vec<Poly> {
    monic_polys(fq, d)
        .into_iter()
        .filter(|f| f.is_irreducible(fq))
        .collect()
}

/// Parse the polynomial text format. Accepts `T^3+2T+1` and
/// `T^3 + 2*T + 1` equivalently, unary minus (`T^3-T+1`), and `x` as an
/// alternative variable name is *not* accepted — the variable is `T`
/// (case-sensitive). Integer coefficients are packed field values; for
/// e = 1 any integer is accepted and reduced mod p.
pub fn parse_poly(fq: &Fq, s: &str) -> Result<Poly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = compact.as_bytes();
    let mut i = 0usize;
    let mut acc = Poly::zero();
    let mut sign_neg = false;
    // Leading sign.
    if bytes[i] == b'+' {
        i += 1;
    } else if bytes[i] == b'-' {
        sign_neg = true;
        i += 1;
    }
    loop {
        // One term: [int] [*] [T [^int]]
        let start = i;
        let mut coeff: Option<u64> = None;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i > start {
            let n: u64 = compact[start..i]
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer in '{s}'")))?;
            let v = if fq.e() == 1 {
                fq.from_int(n)
            } else {
                if n >= fq.q() {
                    return Err(Error::Parse(format!(
                        "coefficient {n} out of range for q = {}",
                        fq.q()
                    )));
                }
                n
            };
            coeff = Some(v);
        }
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
            if i >= bytes.len() || bytes[i] != b'T' {
                return Err(Error::Parse(format!("expected T after '*' in '{s}'")));
            }
        }
        let mut exp = 0usize;
        if i < bytes.len() && bytes[i] == b'T' {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let es = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == es {
                    return Err(Error::Parse(format!("missing exponent in '{s}'")));
                }
                exp = compact[es..i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{s}'")))?;
                if exp > 1 << 20 {
                    return Err(Error::Parse("exponent too large".into()));
                }
            }
        } else if coeff.is_none() {
            return Err(Error::Parse(format!("expected term at byte {i} in '{s}'")));
        }
        let mut c = coeff.unwrap_or(1);
        if sign_neg {
            c = fq.neg(c);
        }
        if c != 0 {
            let mut term = vec![0u64; exp + 1];
            term[exp] = c;
            acc = acc.add(fq, &Poly::from_coeffs(term));
        }
        if i == bytes.len() {
            break;
        }
        match bytes[i] {
            b'+' => {
                sign_neg = false;
                i += 1;
            }
            b'-' => {
                sign_neg = true;
                i += 1;
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character '{}' in '{s}'",
                    compact[i..].chars().next().unwrap()
                )))
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fq {
        Fq::new(3, 1).unwrap()
    }

    #[test]
    fn ring_basics() {
        let fq = f3();
        let a = parse_poly(&fq, "T^2 + 1").unwrap();
        let b = parse_poly(&fq, "T + 2").unwrap();
        let prod = a.mul(&fq, &b);
        assert_eq!(prod.to_text(), "T^3 + 2*T^2 + T + 2");
        let (q, r) = prod.divrem(&fq, &b).unwrap();
        assert_eq!(q, a);
        assert!(r.is_zero());
    }

    #[test]
    fn divrem_matches_recombination() {
        let fq = f3();
        let a = parse_poly(&fq, "T^5 + 2*T^3 + T + 1").unwrap();
        let b = parse_poly(&fq, "2*T^2 + T").unwrap();
        let (q, r) = a.divrem(&fq, &b).unwrap();
        assert!(r.deg_i64() < b.deg_i64());
        assert_eq!(q.mul(&fq, &b).add(&fq, &r), a);
    }

    #[test]
    fn gcd_is_monic_common_divisor() {
        let fq = f3();
        let g = parse_poly(&fq, "T^2 + 1").unwrap();
        let a = g.mul(&fq, &parse_poly(&fq, "T + 1").unwrap());
        let b = g.mul(&fq, &parse_poly(&fq, "2*T + 1").unwrap());
        assert_eq!(a.gcd(&fq, &b), g);
        let (d, s, t) = a.egcd(&fq, &b);
        assert_eq!(d, g);
        assert_eq!(s.mul(&fq, &a).add(&fq, &t.mul(&fq, &b)), g);
    }

    #[test]
    fn irreducibility_pinned() {
        let fq = f3();
        assert!(parse_poly(&fq, "T^3 - T + 1").unwrap().is_irreducible(&fq));
        assert!(!parse_poly(&fq, "T^3 - T").unwrap().is_irreducible(&fq));
        assert!(parse_poly(&fq, "T^2 + 1").unwrap().is_irreducible(&fq));
        assert!(!parse_poly(&fq, "T^2 + 2").unwrap().is_irreducible(&fq)); // (T+1)(T+2)
        assert!(parse_poly(&fq, "T").unwrap().is_irreducible(&fq));
        assert!(!Poly::one().is_irreducible(&fq));
        assert!(!Poly::zero().is_irreducible(&fq));
    }

    #[test]
    fn eight_monic_irreducible_cubics_over_f3() {
        // Necklace count (3³ − 3)/3 = 8.
        let fq = f3();
        let irr = monic_irreducibles(&fq, 3);
        assert_eq!(irr.len(), 8);
        // Deterministic order: the first is T^3 + 2*T + 1.
        assert_eq!(irr[0].to_text(), "T^3 + 2*T + 1");
        // All distinct, all monic, all degree 3.
        for f in &irr {
            assert!(f.is_monic());
            assert_eq!(f.deg(), Some(3));
        }
    }

    #[test]
    fn three_monic_irreducible_quadratics_over_f3() {
        let fq = f3();
        let irr = monic_irreducibles(&fq, 2);
        assert_eq!(irr.len(), 3); // (9 − 3)/2
        assert_eq!(irr[0].to_text(), "T^2 + 1");
    }

    #[test]
    fn brackets_pinned() {
        let fq = f3();
        assert_eq!(bracket(&fq, 1).unwrap().to_text(), "T^3 + 2*T");
        let b2 = bracket(&fq, 2).unwrap();
        assert_eq!(b2.deg(), Some(9));
        assert_eq!(b2.coeff(1), 2);
        assert!(bracket(&fq, 0).is_err());
    }

    #[test]
    fn bracket_divides_bracket_when_index_divides() {
        let fq = f3();
        let b1 = bracket(&fq, 1).unwrap();
        let b2 = bracket(&fq, 2).unwrap();
        let b3 = bracket(&fq, 3).unwrap();
        assert!(b3.rem(&fq, &b1).unwrap().is_zero());
        assert!(b2.rem(&fq, &b1).unwrap().is_zero());
        // 2 does not divide 3:
        assert!(!b3.rem(&fq, &b2).unwrap().is_zero());
    }

    #[test]
    fn bracket_is_product_of_irreducibles_of_dividing_degree() {
        // Exhaustive factorization oracle for q = 3, i ≤ 3: [i] equals the
        // product of all monic irreducibles of degree dividing i.
        let fq = f3();
        for i in 1u32..=3 {
            let mut prod = Poly::one();
            for d in 1..=i {
                if i % d == 0 {
                    for f in monic_irreducibles(&fq, d) {
                        prod = prod.mul(&fq, &f);
                    }
                }
            }
            assert_eq!(prod, bracket(&fq, i).unwrap(), "i = {i}");
        }
    }

    #[test]
    fn d_factorial_pinned() {
        let fq = f3();
        assert!(d_factorial(&fq, 0).unwrap().is_one());
        assert_eq!(d_factorial(&fq, 1).unwrap(), bracket(&fq, 1).unwrap());
        // d_2 = [2]·[1]^3
        let d2 = d_factorial(&fq, 2).unwrap();
        let expected = bracket(&fq, 2)
            .unwrap()
            .mul(&fq, &bracket(&fq, 1).unwrap().pow(&fq, 3));
        assert_eq!(d2, expected);
        // d_i is the product of all monic polynomials of degree i.
        for i in 1u32..=2 {
            let mut prod = Poly::one();
            for f in monic_polys(&fq, i) {
                prod = prod.mul(&fq, &f);
            }
            assert_eq!(prod, d_factorial(&fq, i).unwrap(), "i = {i}");
        }
    }

    #[test]
    fn parse_and_print_round_trip() {
        let fq = f3();
        for s in ["T^3 + 2*T + 1", "2*T^4 + T^2 + 2", "0", "1", "T", "2*T"] {
            let p = parse_poly(&fq, s).unwrap();
            assert_eq!(p.to_text(), s);
            assert_eq!(parse_poly(&fq, &p.to_text()).unwrap(), p);
        }
        // Loose input forms.
        assert_eq!(
            parse_poly(&fq, "T^3+2T+1").unwrap(),
            parse_poly(&fq, "T^3 + 2*T + 1").unwrap()
        );
        assert_eq!(
            parse_poly(&fq, "T^3-T+1").unwrap(),
            parse_poly(&fq, "T^3 + 2*T + 1").unwrap()
        );
        assert_eq!(parse_poly(&fq, "-1").unwrap(), Poly::constant(2));
        assert!(parse_poly(&fq, "").is_err());
        assert!(parse_poly(&fq, "T^").is_err());
        assert!(parse_poly(&fq, "x + 1").is_err());
    }

    #[test]
    fn frobenius_power_matches_generic_power() {
        let fq = f3();
        let f = parse_poly(&fq, "T^2 + 2*T + 1").unwrap();
        assert_eq!(f.pow_frobenius(&fq), f.pow(&fq, 3));
    }

    #[test]
    fn eval_horner() {
        let fq = f3();
        let f = parse_poly(&fq, "T^3 + 2*T + 1").unwrap();
        assert_eq!(f.eval(&fq, 0), 1);
        assert_eq!(f.eval(&fq, 1), 1); // 1 + 2 + 1 = 4 ≡ 1
        assert_eq!(f.eval(&fq, 2), 1); // 8 + 4 + 1 = 13 ≡ 1
    }
}
