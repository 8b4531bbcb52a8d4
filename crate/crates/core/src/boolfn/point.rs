use std::fmt;
use std::str::FromStr;

use super::BoolFnError;

/// A set of coordinates packed as a bitmask; bit `i` stands for variable `x_{i+1}`.
pub type Mask = u64;

/// Largest supported ambient dimension.
pub const MAX_N: usize = 64;

/// Mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterate the coordinates set in `m`, ascending.
pub fn mask_indices(m: Mask) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// An assignment in `{0,1}^n`, `n <= 64`.
///
/// Coordinates are 0-based internally. The text form lists `x_1` first, so
/// `"101"` sets coordinates 0 and 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    bits: u64,
    n: u8,
}

impl Point {
    pub fn new(n: usize, bits: u64) -> Self {
        assert!(n <= MAX_N, "dimension {n} exceeds {MAX_N}");
        Point {
            bits: bits & full_mask(n),
            n: n as u8,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Point::new(n, 0)
    }

    pub fn ones(n: usize) -> Self {
        Point::new(n, u64::MAX)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.n());
        (self.bits >> i) & 1 == 1
    }

    pub fn with(&self, i: usize, b: bool) -> Self {
        let bits = if b {
            self.bits | (1 << i)
        } else {
            self.bits & !(1 << i)
        };
        Point::new(self.n(), bits)
    }

    pub fn flip(&self, i: usize) -> Self {
        Point::new(self.n(), self.bits ^ (1 << i))
    }

    /// Complement the coordinates in `m`.
    pub fn flip_mask(&self, m: Mask) -> Self {
        Point::new(self.n(), self.bits ^ m)
    }

    /// Zero the coordinates in `m`.
    pub fn clear_mask(&self, m: Mask) -> Self {
        Point::new(self.n(), self.bits & !m)
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Coordinatewise AND, written `a*y` in the learners.
    pub fn and(&self, other: Point) -> Self {
        Point::new(self.n(), self.bits & other.bits)
    }

    pub fn xor(&self, other: Point) -> Self {
        Point::new(self.n(), self.bits ^ other.bits)
    }

    /// `self` on `m`, `other` elsewhere.
    pub fn splice(&self, m: Mask, other: Point) -> Self {
        Point::new(self.n(), (self.bits & m) | (other.bits & !m))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({self})")
    }
}

impl FromStr for Point {
    type Err = BoolFnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > MAX_N {
            return Err(BoolFnError::TooLarge { n: s.len(), max: MAX_N });
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(BoolFnError::Parse(format!("bad point character {c:?}"))),
            }
        }
        Ok(Point::new(s.len(), bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_lists_x1_first() {
        let p: Point = "101".parse().unwrap();
        assert_eq!(p.bits(), 0b101);
        assert!(p.get(0) && !p.get(1) && p.get(2));
        assert_eq!(p.to_string(), "101");
        let q: Point = "0011".parse().unwrap();
        assert_eq!(q.bits(), 0b1100);
    }

    #[test]
    fn splice_takes_first_on_mask() {
        let u: Point = "111".parse().unwrap();
        let w = Point::zeros(3);
        assert_eq!(u.splice(0b101, w).to_string(), "101");
    }

    #[test]
    fn mask_indices_ascending() {
        let v: Vec<_> = mask_indices(0b1010_0001).collect();
        assert_eq!(v, vec![0, 5, 7]);
    }
}
