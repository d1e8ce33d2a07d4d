//! Finite fields `GF(q)` for prime-power `q ≤ 2¹⁶`.
//!
//! Elements are the integers `0..q`. For a prime field that integer is the
//! residue; for `GF(p^m)` it packs the base-`p` digits of the polynomial
//! coefficients (lowest degree in the least significant digit), reduced
//! modulo a fixed Conway polynomial. Multiplication goes through exp/log
//! tables built from a primitive element.

use crate::error::{Error, Result};

/// A field element in integer representation.
pub type FieldElem = u32;

/// Largest supported order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Conway polynomials: `(p, m, [c_0, …, c_{m−1}])` for the monic
/// `x^m + c_{m−1} x^{m−1} + … + c_0`.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 1, 1, 0]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0]),
    (2, 10, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 12, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (3, 4, &[2, 0, 0, 2]),
    (3, 5, &[1, 2, 0, 0, 0]),
    (3, 6, &[2, 2, 1, 0, 2, 0]),
    (5, 2, &[2, 4]),
    (5, 3, &[3, 3, 0]),
    (5, 4, &[2, 4, 4, 0]),
    (7, 2, &[3, 6]),
    (7, 3, &[4, 0, 6]),
    (11, 2, &[2, 7]),
    (13, 2, &[2, 12]),
];

#[derive(Clone, Debug)]
enum Repr {
    Prime,
    Extension { modulus: Vec<u32> },
}

/// The finite field of `q` elements.
#[derive(Clone, Debug)]
pub struct Field {
    order: u32,
    characteristic: u32,
    degree: u32,
    repr: Repr,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q = p^m`, or returns `None` if `q` is not a prime power.
fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

impl Field {
    /// Builds `GF(q)`. Fails for non-prime-powers, orders above
    /// [`MAX_ORDER`], and prime powers without a tabulated modulus.
    pub fn new(q: u32) -> Result<Field> {
        if q > MAX_ORDER {
            return Err(Error::invalid(format!("field order {q} exceeds {MAX_ORDER}")));
        }
        let (p, m) = prime_power(q)
            .ok_or_else(|| Error::invalid(format!("field order {q} is not a prime power")))?;
        let repr = if m == 1 {
            Repr::Prime
        } else {
            let &(_, _, coeffs) = CONWAY
                .iter()
                .find(|(cp, cm, _)| *cp == p && *cm == m)
                .ok_or_else(|| {
                    Error::Unsupported(format!("no irreducible polynomial tabulated for {p}^{m}"))
                })?;
            Repr::Extension {
                modulus: coeffs.to_vec(),
            }
        };
        Field::with_repr(q, p, m, repr)
    }

    /// Builds `GF(p^m)` from a caller-supplied monic modulus
    /// `x^m + c_{m−1} x^{m−1} + … + c_0`, given as `[c_0, …, c_{m−1}]`.
    /// Fails if the quotient ring is not a field.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("characteristic {p} is not prime")));
        }
        let m = modulus.len() as u32;
        if m < 2 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::invalid("modulus must have degree ≥ 2 and coefficients below p"));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::invalid("field order exceeds the supported maximum"))?;
        Field::with_repr(
            q,
            p,
            m,
            Repr::Extension {
                modulus: modulus.to_vec(),
            },
        )
    }

    fn with_repr(q: u32, p: u32, m: u32, repr: Repr) -> Result<Field> {
        let mut field = Field {
            order: q,
            characteristic: p,
            degree: m,
            repr,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if q == 2 {
            field.exp = vec![1];
            field.log = vec![0, 0];
            return Ok(field);
        }
        let factors = prime_factors(q - 1);
        let generator = (2..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| field.slow_pow(g, ((q - 1) / r) as u64) != 1)
                    && field.slow_pow(g, (q - 1) as u64) == 1
            })
            .ok_or_else(|| {
                Error::invalid(format!("modulus does not define a field of order {q}"))
            })?;
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for e in 0..q - 1 {
            exp.push(x);
            log[x as usize] = e;
            x = field.slow_mul(x, generator);
        }
        field.exp = exp;
        field.log = log;
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficients `[c_0, …, c_{m−1}]` of the reducing polynomial, if any.
    pub fn modulus(&self) -> Option<&[u32]> {
        match &self.repr {
            Repr::Prime => None,
            Repr::Extension { modulus } => Some(modulus),
        }
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a < self.order
    }

    /// `ω_j`, the `j`-th element (1-based) of the canonical ordering;
    /// `ω_j` has integer representation `j − 1`.
    pub fn element(&self, j: u32) -> Result<FieldElem> {
        if j == 0 || j > self.order {
            return Err(Error::invalid(format!(
                "element index {j} outside 1..={}",
                self.order
            )));
        }
        Ok(j - 1)
    }

    /// `ω_1, …, ω_n`.
    pub fn first_elements(&self, n: usize) -> Result<Vec<FieldElem>> {
        if n > self.order as usize {
            return Err(Error::invalid(format!(
                "requested {n} distinct elements from a field of {} elements",
                self.order
            )));
        }
        Ok((0..n as u32).collect())
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match self.repr {
            Repr::Prime => (a + b) % self.order,
            Repr::Extension { .. } if self.characteristic == 2 => a ^ b,
            Repr::Extension { .. } => self.digitwise(a, b, |x, y| x + y),
        }
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        match self.repr {
            Repr::Prime => (self.order - a) % self.order,
            Repr::Extension { .. } if self.characteristic == 2 => a,
            Repr::Extension { .. } => self.digitwise(0, a, |_, y| self.characteristic - y),
        }
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order as usize - 1;
        let e = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[e % n]
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a == 0 || a >= self.order {
            return Err(Error::invalid(format!("{a} has no inverse in GF({})", self.order)));
        }
        let n = self.order as usize - 1;
        Ok(self.exp[(n - self.log[a as usize] as usize) % n])
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.order as u64 - 1;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Applies `op` to each pair of base-`p` digits, reducing mod `p`.
    fn digitwise(&self, a: u32, b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let p = self.characteristic;
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.degree {
            out += (op(a % p, b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    /// Table-free multiplication used while the tables are being built.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.characteristic;
        let modulus = match &self.repr {
            Repr::Prime => return ((a as u64 * b as u64) % p as u64) as u32,
            Repr::Extension { modulus } => modulus,
        };
        let m = self.degree as usize;
        let digits = |mut x: u32| {
            (0..m)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect::<Vec<_>>()
        };
        let (da, db) = (digits(a), digits(b));
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // x^m ≡ −(c_0 + … + c_{m−1} x^{m−1})
        for top in (m..prod.len()).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            prod[top] = 0;
            for (k, &c) in modulus.iter().enumerate() {
                let idx = top - m + k;
                prod[idx] = (prod[idx] + (p - lead) * c % p) % p;
            }
        }
        prod[..m].iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// `(p, m)` pairs with a tabulated modulus.
pub fn tabulated_extensions() -> impl Iterator<Item = (u32, u32)> {
    CONWAY.iter().map(|&(p, m, _)| (p, m))
}
