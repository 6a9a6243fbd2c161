use super::HashError;

/// The Mersenne prime 2^61 - 1.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Arithmetic modulo a prime `p`. Residues are kept in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        Self::mersenne61()
    }
}

impl PrimeField {
    /// The field modulo 2^61 - 1, reduced with shifts and adds.
    pub const fn mersenne61() -> Self {
        Self { p: MERSENNE_61 }
    }

    pub fn new(p: u64) -> Result<Self, HashError> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(HashError::NotPrime(p))
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if self.p == MERSENNE_61 {
            let y = (x & MERSENNE_61) + (x >> 61);
            if y >= MERSENNE_61 {
                y - MERSENNE_61
            } else {
                y
            }
        } else {
            x % self.p
        }
    }

    pub fn check_residue(&self, value: u64) -> Result<u64, HashError> {
        if value < self.p {
            Ok(value)
        } else {
            Err(HashError::ResidueOutOfRange { value, p: self.p })
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        // a, b < p < 2^63, so the sum cannot overflow
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let prod = u128::from(a) * u128::from(b);
        if self.p == MERSENNE_61 {
            let lo = (prod as u64) & MERSENNE_61;
            let hi = (prod >> 61) as u64;
            self.reduce(lo + hi)
        } else {
            (prod % u128::from(self.p)) as u64
        }
    }

    /// Horner evaluation of `coefficients[0] + coefficients[1] x + ...`.
    /// `x` and the coefficients must already be residues.
    #[inline]
    pub fn horner(&self, coefficients: &[u64], x: u64) -> u64 {
        coefficients
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((u128::from(a) * u128::from(b)) % u128::from(n)) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    let shift = (n - 1).trailing_zeros();
    let odd = (n - 1) >> shift;
    'witness: for a in SMALL {
        let mut x = powmod(a, odd);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..shift {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
