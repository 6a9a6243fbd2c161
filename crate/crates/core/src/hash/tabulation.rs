use rand::Rng;

use super::{HashError, SlotHash};
use crate::{seed, Key};

const MAX_CHAR_BITS: u32 = 20;

/// Simple tabulation: a key is split into `c` characters `x_1..x_c`, and
/// hashed to `T_1[x_1] xor ... xor T_c[x_c]`.
///
/// `x_1` is the least-significant character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabulationHash {
    chars: u32,
    char_bits: u32,
    output_bits: u32,
    /// `chars` tables of `2^char_bits` entries, stored back to back.
    tables: Vec<u64>,
}

fn output_mask(bits: u32) -> u64 {
    if bits == 64 {
        u64::MAX
    } else {
        (1 << bits) - 1
    }
}

fn check_shape(chars: u32, char_bits: u32, output_bits: u32) -> Result<(), HashError> {
    let overflow = HashError::WidthOverflow {
        chars,
        char_bits,
        output_bits,
    };
    if chars == 0 || char_bits == 0 || output_bits > 64 {
        return Err(overflow);
    }
    match chars.checked_mul(char_bits) {
        Some(width) if width <= 64 => {}
        _ => return Err(overflow),
    }
    if char_bits > MAX_CHAR_BITS {
        return Err(HashError::TableTooLarge(char_bits));
    }
    Ok(())
}

impl TabulationHash {
    pub fn new(chars: u32, char_bits: u32, output_bits: u32, seed: u64) -> Result<Self, HashError> {
        check_shape(chars, char_bits, output_bits)?;
        let mask = output_mask(output_bits);
        let mut rng = seed::rng(seed);
        let len = (chars as usize) << char_bits;
        let tables = (0..len).map(|_| rng.gen::<u64>() & mask).collect();
        Ok(Self {
            chars,
            char_bits,
            output_bits,
            tables,
        })
    }

    /// Builds from explicit tables, `tables[i]` being `T_{i+1}`.
    pub fn from_tables(char_bits: u32, output_bits: u32, tables: Vec<Vec<u64>>) -> Result<Self, HashError> {
        let chars = tables.len() as u32;
        check_shape(chars, char_bits, output_bits)?;
        let size = 1usize << char_bits;
        let mask = output_mask(output_bits);
        let mut flat = Vec::with_capacity(size * tables.len());
        for table in &tables {
            if table.len() != size {
                return Err(HashError::TableShape {
                    expected: tables.len(),
                    len: size,
                });
            }
            flat.extend(table.iter().map(|&v| v & mask));
        }
        Ok(Self {
            chars,
            char_bits,
            output_bits,
            tables: flat,
        })
    }

    pub fn chars(&self) -> u32 {
        self.chars
    }

    pub fn char_bits(&self) -> u32 {
        self.char_bits
    }

    pub fn output_bits(&self) -> u32 {
        self.output_bits
    }

    /// Number of key bits consumed, `c * char_bits`.
    pub fn key_bits(&self) -> u32 {
        self.chars * self.char_bits
    }

    /// `T_{i+1}`.
    pub fn table(&self, i: usize) -> &[u64] {
        let size = 1usize << self.char_bits;
        &self.tables[i * size..(i + 1) * size]
    }

    /// Requires `x` to fit in `c * char_bits` bits.
    #[inline]
    pub fn eval(&self, x: Key) -> u64 {
        debug_assert!(
            self.key_bits() == 64 || x >> self.key_bits() == 0,
            "key {x} wider than {} bits",
            self.key_bits()
        );
        let char_mask = (1u64 << self.char_bits) - 1;
        let size = 1usize << self.char_bits;
        let mut acc = 0;
        let mut rest = x;
        for i in 0..self.chars as usize {
            acc ^= self.tables[i * size + (rest & char_mask) as usize];
            rest = rest.checked_shr(self.char_bits).unwrap_or(0);
        }
        acc
    }
}

/// With `output_bits = log2 t` the output is directly a slot.
impl SlotHash for TabulationHash {
    fn table_size(&self) -> usize {
        1usize << self.output_bits
    }

    #[inline]
    fn slot(&self, key: Key) -> usize {
        self.eval(key) as usize
    }
}
