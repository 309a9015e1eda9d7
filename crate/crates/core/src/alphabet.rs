use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub const PROTEIN_20: &str = "ACDEFGHIKLMNPQRSTVWY";
pub const DNA_4: &str = "ACGT";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet needs at least 2 symbols, got {0}")]
    TooSmall(usize),
    #[error("symbol {symbol:?} appears more than once in alphabet")]
    Duplicate { symbol: char },
    #[error("whitespace is not a valid alphabet symbol")]
    Whitespace,
}

/// Ordered, duplicate-free symbol set. A symbol's index is its position.
///
/// Symbols are stored uppercased; lookups uppercase their input, so the
/// alphabet is effectively case-insensitive.
#[derive(Clone)]
pub struct Alphabet {
    name: String,
    symbols: Vec<char>,
    ascii: [Option<u8>; 128],
    other: HashMap<char, usize>,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, symbols: &str) -> Result<Self, AlphabetError> {
        let symbols: Vec<char> = symbols.chars().flat_map(char::to_uppercase).collect();
        if symbols.len() < 2 {
            return Err(AlphabetError::TooSmall(symbols.len()));
        }
        let mut ascii = [None; 128];
        let mut other = HashMap::new();
        for (i, &c) in symbols.iter().enumerate() {
            if c.is_whitespace() {
                return Err(AlphabetError::Whitespace);
            }
            let fresh = if c.is_ascii() && i < 256 {
                ascii[c as usize].replace(i as u8).is_none()
            } else {
                other.insert(c, i).is_none()
            };
            if !fresh {
                return Err(AlphabetError::Duplicate { symbol: c });
            }
        }
        Ok(Self { name: name.into(), symbols, ascii, other })
    }

    pub fn protein() -> Self {
        Self::new("protein-20", PROTEIN_20).expect("builtin alphabet")
    }

    pub fn dna() -> Self {
        Self::new("dna-4", DNA_4).expect("builtin alphabet")
    }

    /// Resolves a builtin name (`protein-20`, `protein`, `dna-4`, `dna`), or
    /// otherwise treats `spec` as the literal symbol list.
    pub fn from_spec(spec: &str) -> Result<Self, AlphabetError> {
        match spec.to_ascii_lowercase().as_str() {
            "protein-20" | "protein" => Ok(Self::protein()),
            "dna-4" | "dna" => Ok(Self::dna()),
            _ => Self::new(format!("custom:{spec}"), spec),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Zero-based position of `c` (case-insensitive), if present.
    pub fn index_of(&self, c: char) -> Option<usize> {
        if c.is_ascii() {
            let c = c.to_ascii_uppercase();
            if let Some(i) = self.ascii[c as usize] {
                return Some(i as usize);
            }
        }
        let mut upper = c.to_uppercase();
        match (upper.next(), upper.next()) {
            (Some(u), None) => self.other.get(&u).copied(),
            _ => None,
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Alphabet")
            .field("name", &self.name)
            .field("symbols", &self.symbols.iter().collect::<String>())
            .finish()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn protein_indices() {
        let a = Alphabet::protein();
        assert_eq!(a.index_of('A'), Some(0));
        assert_eq!(a.index_of('Y'), Some(19));
        assert_eq!(a.index_of('B'), None);
        assert_eq!(a.index_of('c'), Some(1));
        assert_eq!(a.len(), 20);
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert_eq!(Alphabet::new("x", "A").unwrap_err(), AlphabetError::TooSmall(1));
        assert_eq!(
            Alphabet::new("x", "ACa").unwrap_err(),
            AlphabetError::Duplicate { symbol: 'A' }
        );
        assert_eq!(Alphabet::new("x", "A C").unwrap_err(), AlphabetError::Whitespace);
    }

    #[test]
    fn custom_and_non_ascii() {
        let a = Alphabet::from_spec("xyzé").unwrap();
        assert_eq!(a.name(), "custom:xyzé");
        assert_eq!(a.index_of('Y'), Some(1));
        assert_eq!(a.index_of('é'), Some(3));
        assert_eq!(a.index_of('É'), Some(3));
        assert_eq!(Alphabet::from_spec("DNA").unwrap(), Alphabet::dna());
    }
}
