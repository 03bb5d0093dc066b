//! The rational function field K = F_q(T).
//!
//! [`Rat`] keeps the canonical form at all times: the denominator is monic,
//! numerator and denominator are coprime, and zero is 0/1. Canonical forms
//! make structural equality (`PartialEq`) mathematical equality and make the
//! text format bit-exact.
//!
//! Valuations: `v_inf` is deg(den) − deg(num) (so v_∞(x) = −deg(x) on
//! polynomials) and `v_pi` is the exponent of a monic irreducible π. Both
//! return `None` on 0, the distinguished +infinity.

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::poly::{parse_poly, Poly};

/// An element of K in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rat {
    num: Poly,
    den: Poly,
}

impl Rat {
    pub fn zero() -> Rat {
        Rat { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Rat {
        Rat { num: Poly::one(), den: Poly::one() }
    }

    /// A polynomial, viewed in K.
    pub fn from_poly(p: Poly) -> Rat {
        Rat { num: p, den: Poly::one() }
    }

    /// A packed field constant.
    pub fn from_fq_const(c: u64) -> Rat {
        Rat::from_poly(Poly::constant(c))
    }

    /// An integer via the prime subfield.
    pub fn from_int(fq: &Fq, n: i64) -> Rat {
        Rat::from_poly(Poly::constant(fq.from_signed(n)))
    }

    /// num/den brought to canonical form; error if den = 0.
    pub fn new(fq: &Fq, num: Poly, den: Poly) -> Result<Rat> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Rat::zero());
        }
        let g = num.gcd(fq, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(fq, &g)?, den.div_exact(fq, &g)?)
        };
        if !den.is_monic() {
            let c = fq.inv(den.leading())?;
            den = den.scalar_mul(fq, c);
            num = num.scalar_mul(fq, c);
        }
        Ok(Rat { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the element lies in A (denominator 1).
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The underlying polynomial when integral.
    pub fn as_poly(&self) -> Option<&Poly> {
        if self.is_integral() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, fq: &Fq, rhs: &Rat) -> Rat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Fast path: both in A. Stays canonical without any gcd.
        if self.den.is_one() && rhs.den.is_one() {
            return Rat { num: self.num.add(fq, &rhs.num), den: Poly::one() };
        }
        let g = self.den.gcd(fq, &rhs.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (
                self.den.div_exact(fq, &g).expect("gcd divides"),
                rhs.den.div_exact(fq, &g).expect("gcd divides"),
            )
        };
        // lcm = da·rhs.den; num = a.num·db + b.num·da.
        let num = self.num.mul(fq, &db).add(fq, &rhs.num.mul(fq, &da));
        let den = da.mul(fq, &rhs.den);
        Rat::new(fq, num, den).expect("den nonzero")
    }

    pub fn neg(&self, fq: &Fq) -> Rat {
        Rat { num: self.num.neg(fq), den: self.den.clone() }
    }

    pub fn sub(&self, fq: &Fq, rhs: &Rat) -> Rat {
        self.add(fq, &rhs.neg(fq))
    }

    pub fn mul(&self, fq: &Fq, rhs: &Rat) -> Rat {
        if self.is_zero() || rhs.is_zero() {
            return Rat::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        // Fast path: both in A.
        if self.den.is_one() && rhs.den.is_one() {
            return Rat { num: self.num.mul(fq, &rhs.num), den: Poly::one() };
        }
        // Cross-cancel before multiplying to keep degrees down; the result
        // is then already canonical (monic denominators stay monic).
        let g1 = self.num.gcd(fq, &rhs.den);
        let g2 = rhs.num.gcd(fq, &self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.div_exact(fq, &g1).expect("gcd divides") };
        let d2 = if g1.is_one() { rhs.den.clone() } else { rhs.den.div_exact(fq, &g1).expect("gcd divides") };
        let n2 = if g2.is_one() { rhs.num.clone() } else { rhs.num.div_exact(fq, &g2).expect("gcd divides") };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.div_exact(fq, &g2).expect("gcd divides") };
        Rat { num: n1.mul(fq, &n2), den: d1.mul(fq, &d2) }
    }

    pub fn inv(&self, fq: &Fq) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = fq.inv(self.num.leading())?;
        Ok(Rat {
            num: self.den.scalar_mul(fq, c),
            den: self.num.scalar_mul(fq, c),
        })
    }

    pub fn div(&self, fq: &Fq, rhs: &Rat) -> Result<Rat> {
        Ok(self.mul(fq, &rhs.inv(fq)?))
    }

    pub fn scalar_mul(&self, fq: &Fq, c: u64) -> Rat {
        if c == 0 {
            return Rat::zero();
        }
        Rat { num: self.num.scalar_mul(fq, c), den: self.den.clone() }
    }

    pub fn pow(&self, fq: &Fq, n: u64) -> Rat {
        Rat {
            num: self.num.pow(fq, n),
            den: self.den.pow(fq, n),
        }
    }

    /// v_∞ = deg(den) − deg(num); None (read: +∞) on 0.
    pub fn v_inf(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.den.deg_i64() - self.num.deg_i64())
    }

    /// π-adic valuation for monic irreducible π; None (read: +∞) on 0.
    pub fn v_pi(&self, fq: &Fq, pi: &Poly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let count = |mut f: Poly| -> i64 {
            let mut n = 0;
            loop {
                let (q, r) = f.divrem(fq, pi).expect("pi nonzero");
                if !r.is_zero() {
                    return n;
                }
                n += 1;
                f = q;
            }
        };
        // num and den are coprime, so at most one side carries π.
        Some(count(self.num.clone()) - count(self.den.clone()))
    }

    /// Canonical text: `num` when integral, otherwise `num/den` with either
    /// side parenthesized when it has more than one term.
    pub fn to_text(&self) -> String {
        if self.den.is_one() {
            return self.num.to_text();
        }
        let wrap = |p: &Poly| -> String {
            if p.term_count() > 1 {
                format!("({})", p.to_text())
            } else {
                p.to_text()
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// Parse `num`, `num/den`, `(num)/(den)` in the polynomial text format.
pub fn parse_rat(fq: &Fq, s: &str) -> Result<Rat> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    // Split on a '/' at paren depth 0.
    let mut depth = 0i32;
    let mut slash = None;
    for (i, ch) in compact.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                if slash.is_some() {
                    return Err(Error::Parse("multiple '/' in rational".into()));
                }
                slash = Some(i);
            }
            _ => {}
        }
    }
    let strip = |t: &str| -> String {
        let t = t.trim();
        if t.starts_with('(') && t.ends_with(')') {
            // Only strip if the parens match each other.
            let inner = &t[1..t.len() - 1];
            let mut d = 0i32;
            for ch in inner.chars() {
                match ch {
                    '(' => d += 1,
                    ')' => d -= 1,
                    _ => {}
                }
                if d < 0 {
                    return t.to_string();
                }
            }
            return inner.to_string();
        }
        t.to_string()
    };
    match slash {
        None => Ok(Rat::from_poly(parse_poly(fq, &strip(&compact))?)),
        Some(i) => {
            let num = parse_poly(fq, &strip(&compact[..i]))?;
            let den = parse_poly(fq, &strip(&compact[i + 1..]))?;
            Rat::new(fq, num, den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fq {
        Fq::new(3, 1).unwrap()
    }

    #[test]
    fn canonical_form() {
        let fq = f3();
        // (2T² + 2T)/(2T) canonicalizes to T + 1.
        let r = Rat::new(
            &fq,
            parse_poly(&fq, "2*T^2 + 2*T").unwrap(),
            parse_poly(&fq, "2*T").unwrap(),
        )
        .unwrap();
        assert_eq!(r.to_text(), "T + 1");
        assert!(r.is_integral());
        // Monic denominator after reduction.
        let r2 = Rat::new(
            &fq,
            Poly::one(),
            parse_poly(&fq, "2*T + 1").unwrap(),
        )
        .unwrap();
        assert!(r2.den().is_monic());
        assert_eq!(r2.to_text(), "2/(T + 2)");
    }

    #[test]
    fn field_ops_round_trip() {
        let fq = f3();
        let a = parse_rat(&fq, "(T^2 + 1)/(T + 1)").unwrap();
        let b = parse_rat(&fq, "T/(T^2 + T + 2)").unwrap();
        let s = a.add(&fq, &b);
        assert_eq!(s.sub(&fq, &b), a);
        let p = a.mul(&fq, &b);
        assert_eq!(p.div(&fq, &b).unwrap(), a);
        assert_eq!(a.mul(&fq, &a.inv(&fq).unwrap()), Rat::one());
        assert!(Rat::zero().inv(&fq).is_err());
    }

    #[test]
    fn valuations_pinned() {
        let fq = f3();
        let pi = parse_poly(&fq, "T^2 + 1").unwrap();
        let pi2 = Rat::from_poly(pi.mul(&fq, &pi));
        assert_eq!(pi2.v_pi(&fq, &pi), Some(2));
        let inv = pi2.inv(&fq).unwrap();
        assert_eq!(inv.v_pi(&fq, &pi), Some(-2));
        let one_over_pi = Rat::new(&fq, Poly::one(), pi.clone()).unwrap();
        assert_eq!(one_over_pi.v_pi(&fq, &pi), Some(-1));
        // v_∞(T² + 1) = −2.
        assert_eq!(Rat::from_poly(pi).v_inf(), Some(-2));
        assert_eq!(Rat::zero().v_inf(), None);
        assert_eq!(Rat::zero().v_pi(&fq, &parse_poly(&fq, "T").unwrap()), None);
    }

    #[test]
    fn valuation_is_additive_and_ultrametric() {
        let fq = f3();
        let pi = parse_poly(&fq, "T^3 + 2*T + 1").unwrap();
        let samples = [
            parse_rat(&fq, "(T^3 + 2*T + 1)/(T + 1)").unwrap(),
            parse_rat(&fq, "T^2/(T^3 + 2*T + 1)").unwrap(),
            parse_rat(&fq, "T + 2").unwrap(),
            parse_rat(&fq, "(T^6 + T^4 + 2*T^2 + 2*T + 1)/(T^5)").unwrap(),
        ];
        for x in &samples {
            for y in &samples {
                let vx = x.v_pi(&fq, &pi).unwrap();
                let vy = y.v_pi(&fq, &pi).unwrap();
                assert_eq!(x.mul(&fq, y).v_pi(&fq, &pi), Some(vx + vy));
                let s = x.add(&fq, y);
                if let Some(vs) = s.v_pi(&fq, &pi) {
                    assert!(vs >= vx.min(vy));
                }
                // Same laws at infinity.
                let wx = x.v_inf().unwrap();
                let wy = y.v_inf().unwrap();
                assert_eq!(x.mul(&fq, y).v_inf(), Some(wx + wy));
                if let Some(ws) = s.v_inf() {
                    assert!(ws >= wx.min(wy));
                }
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        let fq = f3();
        for s in [
            "T + 1",
            "2",
            "0",
            "(T^2 + 1)/(T + 2)",
            "2/(T + 2)",
            "T^2/(T^3 + 2*T + 1)",
        ] {
            let r = parse_rat(&fq, s).unwrap();
            assert_eq!(r.to_text(), s, "canonical re-print of '{s}'");
            assert_eq!(parse_rat(&fq, &r.to_text()).unwrap(), r);
        }
    }
}
