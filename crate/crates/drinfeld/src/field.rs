//! The finite coefficient field F_q, q = p^e with p an odd prime.
//!
//! Elements are stored *packed*: an element Σ c_i·X̄^i of
//! F_q = F_p[X]/(m(X)) is the integer Σ c_i·p^i, so the prime-field case
//! (e = 1) is just integers 0..p−1. All arithmetic goes through a field
//! context [`Fq`]; elements themselves are plain `u64` data. This keeps
//! polynomial coefficient vectors flat and lets the hot paths (e = 1)
//! work on machine words.
//!
//! For e > 1 the modulus is chosen deterministically: the lexicographically
//! least monic irreducible of degree e over F_p, comparing coefficient
//! tuples from the leading coefficient downwards. F_9 is
//! F_3[X]/(X² + 1), for instance.
//!
//! Also here: binomial coefficients modulo p by Lucas' digit rule
//! ([`Fq::binom_char_p`]), used everywhere hyperderivatives and Serre
//! operators need integer binomials in characteristic p.

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Field context for F_q. Owns its parameters; elements are packed `u64`.
#[derive(Clone, Debug)]
pub struct Fq {
    p: u64,
    e: u32,
    q: u64,
    /// Pascal's triangle mod p: `binom[m*p + n] = C(m, n) mod p` for m, n < p.
    binom: Vec<u64>,
    /// Present only for e > 1: the degree-e modulus over F_p (little-endian,
    /// monic) and a context for the prime field underneath.
    ext: Option<Box<Ext>>,
}

#[derive(Clone, Debug)]
struct Ext {
    base: Fq,
    modulus: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Fq {
    /// Construct F_{p^e}. Rejects even characteristic (the whole workbench
    /// requires q odd), composite p, e = 0, and sizes that overflow u64.
    pub fn new(p: u64, e: u32) -> Result<Fq> {
        if p == 2 {
            return Err(Error::EvenCharacteristic { q: 2u64.checked_pow(e).unwrap_or(u64::MAX) });
        }
        if !is_prime(p) || p > 1000 {
            return Err(Error::NotPrime { p });
        }
        if e == 0 || e > 10 {
            return Err(Error::InvalidArgument(format!("extension degree e = {e} out of range")));
        }
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q
                .checked_mul(p)
                .ok_or_else(|| Error::InvalidArgument("q overflows u64".into()))?;
        }
        // Pascal's triangle mod p, row by row.
        let pu = p as usize;
        let mut binom = vec![0u64; pu * pu];
        for m in 0..pu {
            binom[m * pu] = 1;
            for n in 1..=m {
                let up = binom[(m - 1) * pu + n];
                let upleft = binom[(m - 1) * pu + n - 1];
                binom[m * pu + n] = (up + upleft) % p;
            }
        }
        let mut fq = Fq { p, e, q, binom, ext: None };
        if e > 1 {
            let base = Fq::new(p, 1)?;
            let modulus = find_extension_modulus(&base, e);
            fq.ext = Some(Box::new(Ext { base, modulus }));
        }
        Ok(fq)
    }

    /// The characteristic p.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The extension degree e.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// The field size q = p^e.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Additive identity.
    pub fn zero(&self) -> u64 {
        0
    }

    /// Multiplicative identity.
    pub fn one(&self) -> u64 {
        1
    }

    /// The element −1.
    pub fn neg_one(&self) -> u64 {
        self.p - 1
    }

    /// Embed an ordinary integer via the prime subfield: n mod p.
    pub fn from_int(&self, n: u64) -> u64 {
        n % self.p
    }

    /// Embed a signed integer via the prime subfield.
    pub fn from_signed(&self, n: i64) -> u64 {
        let p = self.p as i64;
        (n.rem_euclid(p)) as u64
    }

    /// Validate a packed element value.
    pub fn is_element(&self, a: u64) -> bool {
        a < self.q
    }

    fn unpack(&self, mut a: u64) -> Vec<u64> {
        let mut digits = vec![0u64; self.e as usize];
        for d in digits.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        digits
    }

    fn pack(&self, digits: &[u64]) -> u64 {
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * self.p + d;
        }
        v
    }

    /// a + b.
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(self.is_element(a) && self.is_element(b));
        if self.e == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let da = self.unpack(a);
            let db = self.unpack(b);
            let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
            self.pack(&sum)
        }
    }

    /// a − b.
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    /// −a.
    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(self.is_element(a));
        if self.e == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let da = self.unpack(a);
            let neg: Vec<u64> = da.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect();
            self.pack(&neg)
        }
    }

    /// a · b.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(self.is_element(a) && self.is_element(b));
        if self.e == 1 {
            (a * b) % self.p
        } else {
            let ext = self.ext.as_ref().expect("e > 1 has ext data");
            let da = self.unpack(a);
            let db = self.unpack(b);
            // Schoolbook product over F_p, then reduce by the modulus.
            let mut prod = vec![0u64; da.len() + db.len() - 1];
            for (i, &x) in da.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % self.p;
                }
            }
            // Reduce modulo the monic modulus of degree e.
            let e = self.e as usize;
            for i in (e..prod.len()).rev() {
                let c = prod[i];
                if c == 0 {
                    continue;
                }
                prod[i] = 0;
                for (j, &m) in ext.modulus.iter().enumerate().take(e) {
                    if m != 0 {
                        let idx = i - e + j;
                        let sub = (c * m) % self.p;
                        prod[idx] = (prod[idx] + self.p * self.p - sub) % self.p;
                    }
                }
            }
            prod.truncate(e);
            self.pack(&prod)
        }
    }

    /// a^k by binary exponentiation.
    pub fn pow(&self, a: u64, mut k: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// a⁻¹; error on a = 0.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// All q field elements, in packed counting order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }

    /// C(m, n) modulo p, by Lucas' rule: the product of the per-digit
    /// binomials of m and n written in base p. Returns a prime-field value
    /// in 0..p.
    pub fn binom_char_p(&self, mut m: u64, mut n: u64) -> u64 {
        let p = self.p;
        let pu = p as usize;
        let mut acc = 1u64;
        while n > 0 || m > 0 {
            let md = (m % p) as usize;
            let nd = (n % p) as usize;
            if nd > md {
                return 0;
            }
            acc = (acc * self.binom[md * pu + nd]) % p;
            m /= p;
            n /= p;
        }
        acc
    }

    /// Digit sum of n in base q: ‖n‖_q.
    pub fn digit_sum_base_q(&self, mut n: u64) -> u64 {
        let mut s = 0;
        while n > 0 {
            s += n % self.q;
            n /= self.q;
        }
        s
    }

    /// Render one packed element as text (an integer; for e = 1 this is the
    /// canonical residue 0..p−1).
    pub fn fmt_elem(&self, a: u64) -> String {
        a.to_string()
    }
}

/// The lexicographically least monic irreducible of degree e over F_p,
/// comparing coefficient tuples (c_{e−1}, …, c_0) ascending — i.e. plain
/// counting order on the packed non-leading coefficients.
fn find_extension_modulus(base: &Fq, e: u32) -> Vec<u64> {
    let p = base.p();
    let mut bound: u64 = 1;
    for _ in 0..e {
        bound *= p;
    }
    for v in 0..bound {
        let mut coeffs = vec![0u64; e as usize + 1];
        let mut rest = v;
        for c in coeffs.iter_mut().take(e as usize) {
            *c = rest % p;
            rest /= p;
        }
        coeffs[e as usize] = 1;
        let f = Poly::from_coeffs(coeffs.clone());
        if f.is_irreducible(base) {
            return coeffs;
        }
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_characteristic() {
        assert!(matches!(Fq::new(2, 1), Err(Error::EvenCharacteristic { q: 2 })));
        assert!(matches!(Fq::new(2, 3), Err(Error::EvenCharacteristic { .. })));
    }

    #[test]
    fn rejects_composite_p() {
        assert!(matches!(Fq::new(9, 1), Err(Error::NotPrime { p: 9 })));
        assert!(matches!(Fq::new(1, 1), Err(Error::NotPrime { p: 1 })));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(f3.q(), 3);
        assert_eq!(f3.add(2, 2), 1);
        assert_eq!(f3.mul(2, 2), 1);
        assert_eq!(f3.neg(1), 2);
        assert_eq!(f3.inv(2).unwrap(), 2);
        assert!(f3.inv(0).is_err());
        assert_eq!(f3.from_signed(-1), 2);
    }

    #[test]
    fn f9_is_x_squared_plus_one() {
        let f9 = Fq::new(3, 2).unwrap();
        assert_eq!(f9.q(), 9);
        // X̄² = −1: packed X̄ is 3, so 3·3 = packed −1 = 2.
        assert_eq!(f9.mul(3, 3), 2);
        // Field axioms spot-check: every nonzero element has an inverse.
        for a in 1..9 {
            let inv = f9.inv(a).unwrap();
            assert_eq!(f9.mul(a, inv), 1, "a = {a}");
        }
    }

    #[test]
    fn f9_frobenius_fixes_prime_field_only() {
        let f9 = Fq::new(3, 2).unwrap();
        let fixed: Vec<u64> = f9.elements().filter(|&a| f9.pow(a, 3) == a).collect();
        assert_eq!(fixed, vec![0, 1, 2]);
    }

    #[test]
    fn lucas_matches_pascal_recurrence_up_to_200() {
        // Independent oracle: the full Pascal recurrence
        // C(m,n) = C(m−1,n−1) + C(m−1,n), carried mod p (addition commutes
        // with reduction), never using the digit rule.
        for p in [3u64, 5, 7] {
            let fq = Fq::new(p, 1).unwrap();
            let n = 201usize;
            let mut row = vec![0u64; n + 1];
            row[0] = 1;
            for m in 0..n {
                let mut next = vec![0u64; n + 1];
                next[0] = 1;
                for k in 1..=m + 1 {
                    next[k] = (row[k - 1] + row[k]) % p;
                }
                for (k, &val) in next.iter().enumerate().take(m + 2) {
                    assert_eq!(
                        fq.binom_char_p((m + 1) as u64, k as u64),
                        val,
                        "C({}, {}) mod {}",
                        m + 1,
                        k,
                        p
                    );
                }
                row = next;
            }
        }
    }

    #[test]
    fn lucas_pinned_values() {
        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(f3.binom_char_p(4, 2), 0); // 6 ≡ 0 mod 3
        assert_eq!(f3.binom_char_p(3, 1), 0); // C(p, 1) ≡ 0
        assert_eq!(f3.binom_char_p(10, 1), 1); // digits (1,0,1)/(1,0,0)
        let f5 = Fq::new(5, 1).unwrap();
        assert_eq!(f5.binom_char_p(5, 1), 0);
        assert_eq!(f5.binom_char_p(6, 2), 0); // 15 ≡ 0 mod 5
    }

    #[test]
    fn digit_sums() {
        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(f3.digit_sum_base_q(0), 0);
        assert_eq!(f3.digit_sum_base_q(26), 6); // 26 = (2,2,2)_3
        assert_eq!(f3.digit_sum_base_q(27), 1);
    }
}
