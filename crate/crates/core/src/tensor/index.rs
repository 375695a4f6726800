use std::fmt;

use super::TensorError;

/// A standard basis tensor `v_{i1} ⊗ ... ⊗ v_{in}` of `V^{⊗n}`, `dim V = m`.
///
/// Letters are stored 0-based; display and JSON use 1-based letters.
/// Linear positions follow lexicographic order with the leftmost letter most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorIndex {
    m: usize,
    letters: Vec<usize>,
}

impl TensorIndex {
    /// Build from 0-based letters.
    pub fn new(m: usize, letters: Vec<usize>) -> Result<Self, TensorError> {
        if let Some(&bad) = letters.iter().find(|&&l| l >= m) {
            return Err(TensorError::LetterOutOfRange { letter: bad + 1, m });
        }
        Ok(TensorIndex { m, letters })
    }

    /// Build from 1-based letters, as written in the literature.
    pub fn from_one_based(m: usize, letters: &[usize]) -> Result<Self, TensorError> {
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l > m) {
            return Err(TensorError::LetterOutOfRange { letter: bad, m });
        }
        Ok(TensorIndex { m, letters: letters.iter().map(|l| l - 1).collect() })
    }

    pub fn from_position(m: usize, n: usize, pos: usize) -> Self {
        TensorIndex { m, letters: decode(m, n, pos) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn position(&self) -> usize {
        encode(self.m, &self.letters)
    }
}

impl fmt::Display for TensorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (p, l) in self.letters.iter().enumerate() {
            if p > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "v{}", l + 1)?;
        }
        Ok(())
    }
}

/// `m^n`
pub fn tensor_dim(m: usize, n: usize) -> usize {
    m.pow(n as u32)
}

/// Linear position of a 0-based letter sequence.
pub fn encode(m: usize, letters: &[usize]) -> usize {
    letters.iter().fold(0, |acc, &l| acc * m + l)
}

/// Letters of the basis tensor at `pos` in `V^{⊗n}`.
pub fn decode(m: usize, n: usize, mut pos: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = pos % m;
        pos /= m;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_positions() {
        let order: Vec<String> =
            (0..4).map(|p| TensorIndex::from_position(2, 2, p).to_string()).collect();
        assert_eq!(order, ["v1⊗v1", "v1⊗v2", "v2⊗v1", "v2⊗v2"]);
        let t = TensorIndex::from_one_based(3, &[2, 1, 3]).unwrap();
        assert_eq!(t.position(), 9 + 2);
        assert_eq!(decode(3, 3, 11), vec![1, 0, 2]);
    }

    #[test]
    fn out_of_range_letters() {
        assert!(TensorIndex::from_one_based(2, &[3]).is_err());
        assert!(TensorIndex::from_one_based(2, &[0]).is_err());
        assert!(TensorIndex::new(2, vec![2]).is_err());
    }
}
