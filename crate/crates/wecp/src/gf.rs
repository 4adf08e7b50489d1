//! Exact arithmetic for small Galois fields GF(p^m).
//!
//! Elements are integers below the field order, read as base-p digit
//! vectors, i.e. polynomial coefficients in little-endian order. Prime
//! fields reduce modulo `p`; extension fields reduce polynomials modulo
//! the lowest monic irreducible of degree `m`, found by trial division.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds the 2^16 limit")]
    OrderTooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
}

pub const MAX_ORDER: u64 = 1 << 16;

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `f` modulo the monic polynomial `g`, coefficients over
/// GF(p) in little-endian order.
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = f.to_vec();
    let gd = g.len() - 1;
    while r.len() > gd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - gd;
        if lead != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - lead * gc % p) % p;
            }
        }
        r.pop();
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}

fn is_zero_poly(f: &[u32]) -> bool {
    f.iter().all(|&c| c == 0)
}

/// Monic polynomial of degree `deg` encoded by the base-p digits of
/// `enc` as its lower coefficients.
fn monic_from_encoding(enc: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(deg as usize + 1);
    let mut rest = enc;
    for _ in 0..deg {
        coeffs.push((rest % u64::from(p)) as u32);
        rest /= u64::from(p);
    }
    coeffs.push(1);
    coeffs
}

/// First irreducible monic polynomial of degree `m` over GF(p) in
/// ascending coefficient-encoding order.
fn find_irreducible(p: u32, m: u32) -> Vec<u32> {
    let candidates = u64::from(p).pow(m);
    'candidate: for enc in 0..candidates {
        let f = monic_from_encoding(enc, m, p);
        for d in 1..=m / 2 {
            for genc in 0..u64::from(p).pow(d) {
                let g = monic_from_encoding(genc, d, p);
                if is_zero_poly(&poly_rem(&f, &g, p)) {
                    continue 'candidate;
                }
            }
        }
        return f;
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Handle for exact GF(p^m) arithmetic on integer-encoded elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    m: u32,
    order: u32,
    /// Monic modulus for extension fields, empty for degree 1.
    modulus: Vec<u32>,
}

impl GaloisField {
    pub fn new(p: u32, m: u32) -> Result<Self, FieldError> {
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let order = u64::from(p)
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| FieldError::OrderTooLarge(u64::from(p).saturating_pow(m)))?;
        let modulus = if m == 1 {
            Vec::new()
        } else {
            find_irreducible(p, m)
        };
        Ok(GaloisField {
            p,
            m,
            order: order as u32,
            modulus,
        })
    }

    /// Factors a prime power `q = p^m`.
    pub fn for_order(q: u32) -> Result<Self, FieldError> {
        if q < 2 {
            return Err(FieldError::NotPrimePower(q));
        }
        let p = (2..=q).find(|&d| q.is_multiple_of(d)).unwrap();
        let mut rest = q;
        let mut m = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotPrimePower(q));
        }
        Self::new(p, m)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut rest = a;
        for _ in 0..self.m {
            out.push(rest % self.p);
            rest /= self.p;
        }
        out
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.order && b < self.order);
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let negated: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&negated)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.order && b < self.order);
        if self.m == 1 {
            return (u64::from(a) * u64::from(b) % u64::from(self.p)) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * self.m as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((u64::from(prod[i + j]) + u64::from(x) * u64::from(y))
                    % u64::from(self.p)) as u32;
            }
        }
        let reduced = poly_rem(&prod, &self.modulus, self.p);
        self.encode(&reduced)
    }

    pub fn pow(&self, mut base: u32, mut e: u32) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order - 2))
        }
    }
}
