use super::point::{full_mask, Mask};
use super::spec::FunctionSpec;
use super::BoolFnError;

/// Ceiling on exhaustive work: truth tables and brute-force distance stop at this many variables.
pub const MAX_TABLE_N: usize = 24;

/// Truth table of a function on `n <= 24` variables, bit `j` holding `f` at the point with index `j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TruthTable(n={}, {})", self.n, self.to_hex())
    }
}

fn words_for(n: usize) -> usize {
    ((1usize << n) + 63) / 64
}

impl TruthTable {
    pub fn zeros(n: usize) -> Result<Self, BoolFnError> {
        if n > MAX_TABLE_N {
            return Err(BoolFnError::TooLarge { n, max: MAX_TABLE_N });
        }
        Ok(TruthTable { n, words: vec![0; words_for(n)] })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> bool) -> Result<Self, BoolFnError> {
        let mut t = TruthTable::zeros(n)?;
        for j in 0..(1u64 << n) {
            if f(j) {
                t.words[(j >> 6) as usize] |= 1 << (j & 63);
            }
        }
        Ok(t)
    }

    pub fn from_spec(spec: &FunctionSpec) -> Result<Self, BoolFnError> {
        if let super::spec::Repr::TruthTable(t) = spec.repr() {
            return Ok(t.clone());
        }
        TruthTable::from_fn(spec.n(), |x| spec.eval_bits(x))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        self.words[j >> 6] >> (j & 63) & 1 == 1
    }

    pub fn set(&mut self, j: usize, b: bool) {
        if b {
            self.words[j >> 6] |= 1 << (j & 63);
        } else {
            self.words[j >> 6] &= !(1 << (j & 63));
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of points where the two tables differ.
    pub fn hamming(&self, other: &TruthTable) -> u64 {
        assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as u64).sum()
    }

    /// Coordinates whose flip changes the value somewhere.
    pub fn relevant_variables(&self) -> Mask {
        let mut out = 0;
        for i in 0..self.n {
            if self.depends_on(i) {
                out |= 1 << i;
            }
        }
        out
    }

    fn depends_on(&self, i: usize) -> bool {
        if i < 6 {
            // Both halves sit in the same word.
            let shift = 1u32 << i;
            let lo = low_half_mask(i);
            self.words.iter().any(|&w| {
                let w = if self.n < 6 { w & full_mask(1 << self.n) } else { w };
                (w & lo) != ((w >> shift) & lo)
            })
        } else {
            let stride = 1usize << (i - 6);
            self.words
                .chunks(2 * stride)
                .any(|c| c[..stride] != c[stride..])
        }
    }

    /// Hex form of the integer `sum f(j) 2^j`, most significant digit first.
    pub fn to_hex(&self) -> String {
        let digits = ((1usize << self.n) / 4).max(1);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let nib = (self.words[bit >> 6] >> (bit & 63)) & 0xf;
            s.push(char::from_digit(nib as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self, BoolFnError> {
        let mut t = TruthTable::zeros(n)?;
        let hex = hex.trim().trim_start_matches("0x");
        let size = 1usize << n;
        for (d, c) in hex.chars().rev().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| BoolFnError::Parse(format!("bad hex digit {c:?}")))? as u64;
            for b in 0..4 {
                if nib >> b & 1 == 1 {
                    let j = d * 4 + b;
                    if j >= size {
                        return Err(BoolFnError::Parse(format!(
                            "hex table sets point {j} beyond 2^{n}"
                        )));
                    }
                    t.set(j, true);
                }
            }
        }
        Ok(t)
    }
}

fn low_half_mask(i: usize) -> u64 {
    // Bits whose i-th index bit is 0.
    const M: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    M[i]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        let t = TruthTable::from_fn(3, |x| x == 1 || x == 7).unwrap();
        assert_eq!(t.to_hex(), "82");
        assert_eq!(TruthTable::from_hex(3, "82").unwrap(), t);
        let one = TruthTable::from_fn(1, |x| x == 1).unwrap();
        assert_eq!(one.to_hex(), "2");
    }

    #[test]
    fn relevant_across_word_boundary() {
        let t = TruthTable::from_fn(8, |x| x >> 7 & 1 == 1).unwrap();
        assert_eq!(t.relevant_variables(), 1 << 7);
        let u = TruthTable::from_fn(4, |x| (x & 1) ^ (x >> 2 & 1) == 1).unwrap();
        assert_eq!(u.relevant_variables(), 0b101);
    }

    #[test]
    fn refuses_large_tables() {
        assert!(TruthTable::zeros(25).is_err());
    }
}
