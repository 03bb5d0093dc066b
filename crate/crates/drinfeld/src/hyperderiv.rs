//! Hyperderivatives D_n acting on u-series, and Hasse derivatives 𝔇^(n)
//! acting on polynomials.
//!
//! The family {D_n} is the divided-power analogue of d/du adapted to the
//! uniformizer u: D_1 = u²·d/du, D_0 = id, and the higher operators satisfy
//! the iterativity law D_i ∘ D_j = C(i+j, i)·D_{i+j} together with the
//! Leibniz product rule D_n(fg) = Σ_{i+j=n} D_i(f)·D_j(g).
//!
//! Concretely, writing f = Σ_i a_i uⁱ, the n-th hyperderivative is
//!
//!     D_n(f) = Σ_i b_{n,i} uⁱ   with
//!     b_{n,i} = Σ_{r=1}^{i−1} (−1)^{n+r} · C(i−1, r) · α_{n,r} · a_{i−r},
//!
//! where C(·,·) is a binomial coefficient reduced mod p and the rational
//! constants α_{n,r} ∈ K are determined by the recurrence
//!
//!     α(0,0) = 1,   α(n,0) = 0 for n > 0,
//!     α(n,r) = Σ_{m : q^m ≤ n} α(n − q^m, r − 1) / d_m,
//!
//! with d_m the Carlitz factorials (d_0 = 1, d_m = [m]·d_{m−1}^q). The α
//! constants vanish outside ‖n‖_q ≤ r ≤ n, r ≡ ‖n‖_q (mod q−1), where
//! ‖n‖_q is the base-q digit sum; this is a consequence of the recurrence,
//! not an input to it, so the table is computed honestly and the vanishing
//! pattern is checked in tests.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::coeff::{CoeffField, KField};
use crate::field::Fq;
use crate::poly::d_factorial;
use crate::rat::Rat;
use crate::series::{KSeries, Series};
use crate::xpoly::XPoly;

/// Binomial coefficient C(m, n) reduced mod the prime p, by Lucas' rule:
/// the product over base-p digit pairs of the small binomials C(m_i, n_i).
pub fn binom_mod_p(p: u64, mut m: u64, mut n: u64) -> u64 {
    assert!(p >= 2, "characteristic must be at least 2");
    let mut acc = 1u64;
    while n > 0 || m > 0 {
        let (md, nd) = (m % p, n % p);
        if nd > md {
            return 0;
        }
        // C(md, nd) mod p for digits < p, by the multiplicative formula.
        let mut digit = 1u64;
        for i in 1..=nd {
            digit = digit * ((md - nd + i) % p) % p;
            digit = digit * mod_inv(i % p, p) % p;
        }
        acc = acc * digit % p;
        m /= p;
        n /= p;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p−2) mod p for prime p and a ≢ 0.
    debug_assert!(a % p != 0);
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Memoized table of the hyperderivative constants α(n, r) over a fixed F_q.
///
/// Shared across threads: lookups take the lock briefly, recomputation
/// races are benign because every writer stores the same value.
pub struct AlphaTable {
    fq: Fq,
    inv_dfact: Mutex<HashMap<u64, Rat>>,
    memo: Mutex<HashMap<(u64, u64), Rat>>,
}

impl AlphaTable {
    pub fn new(fq: Fq) -> AlphaTable {
        AlphaTable {
            fq,
            inv_dfact: Mutex::new(HashMap::new()),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    /// 1/d_m as an element of K.
    fn inv_d(&self, m: u64) -> Rat {
        if let Some(v) = self.inv_dfact.lock().unwrap().get(&m) {
            return v.clone();
        }
        let d = d_factorial(&self.fq, m as u32).expect("d_m index within degree bounds");
        let inv = Rat::from_poly(d).inv(&self.fq).expect("d_m is nonzero");
        self.inv_dfact.lock().unwrap().insert(m, inv.clone());
        inv
    }

    /// The constant α(n, r) ∈ K.
    pub fn alpha(&self, n: u64, r: u64) -> Rat {
        if r == 0 {
            return if n == 0 { Rat::one() } else { Rat::zero() };
        }
        if n == 0 {
            return Rat::zero();
        }
        if let Some(v) = self.memo.lock().unwrap().get(&(n, r)) {
            return v.clone();
        }
        let q = self.fq.q();
        let mut acc = Rat::zero();
        let mut m = 0u64;
        let mut qm = 1u64;
        while qm <= n {
            let prev = self.alpha(n - qm, r - 1);
            if !prev.is_zero() {
                acc = acc.add(&self.fq, &prev.mul(&self.fq, &self.inv_d(m)));
            }
            m += 1;
            match qm.checked_mul(q) {
                Some(next) => qm = next,
                None => break,
            }
        }
        self.memo.lock().unwrap().insert((n, r), acc.clone());
        acc
    }
}

/// The n-th hyperderivative D_n(f) of a u-series, to the precision of f.
pub fn hyperderivative(at: &AlphaTable, f: &KSeries, n: u64) -> KSeries {
    if n == 0 {
        return f.clone();
    }
    let kf = KField::new(at.fq.clone());
    let fq = &at.fq;
    let prec = f.prec();
    // Nonzero input coefficients a_j with j ≥ 1 (a_0 never contributes).
    let support: Vec<usize> = (1..prec).filter(|&j| !f.coeff(j).is_zero()).collect();
    let mut out = Series::zero(&kf, prec);
    for i in 2..prec {
        let mut b = Rat::zero();
        for &j in &support {
            // a_j enters b_{n,i} through r = i − j, valid for 1 ≤ r ≤ i−1.
            if j >= i {
                break;
            }
            let r = (i - j) as u64;
            let c = fq.binom_char_p((i - 1) as u64, r);
            if c == 0 {
                continue;
            }
            let al = at.alpha(n, r);
            if al.is_zero() {
                continue;
            }
            let mut term = al.scalar_mul(fq, c).mul(fq, f.coeff(j));
            if (n + r) % 2 == 1 {
                term = term.neg(fq);
            }
            b = b.add(fq, &term);
        }
        if !b.is_zero() {
            out.set_coeff(i, b);
        }
    }
    out
}

/// The n-th Hasse derivative of a polynomial: 𝔇^(n)(Σ c_m x^m) =
/// Σ_{m ≥ n} C(m, n)·c_m·x^{m−n}, with the binomials reduced mod p.
pub fn hasse_poly<F: CoeffField>(f: &F, poly: &XPoly<F>, n: u64) -> XPoly<F> {
    let p = f.char_p();
    let coeffs = poly.coeffs();
    if (coeffs.len() as u64) <= n {
        return XPoly::zero();
    }
    let out: Vec<F::Elem> = (n as usize..coeffs.len())
        .map(|m| {
            let c = binom_mod_p(p, m as u64, n);
            if c == 0 || f.is_zero(&coeffs[m]) {
                f.zero()
            } else {
                f.mul(&coeffs[m], &f.from_fq(c))
            }
        })
        .collect();
    XPoly::from_coeffs(f, out)
}
