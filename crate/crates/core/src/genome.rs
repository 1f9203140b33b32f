use std::fmt;

use serde::{Deserialize, Serialize};

/// Chromosome representation.
///
/// `Binary` genomes hold one bit per gene. `RandomKey` genomes hold reals in
/// `[0, 1)` whose sort order encodes a permutation.
#[derive(Clone, Debug, PartialEq)]
pub enum Genome {
    Binary(Vec<bool>),
    RandomKey(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenomeKind {
    Binary,
    RandomKey,
}

/// Variant and length every genome of a problem must have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenomeSpec {
    pub kind: GenomeKind,
    pub length: usize,
}

impl GenomeSpec {
    pub fn binary(length: usize) -> Self {
        GenomeSpec {
            kind: GenomeKind::Binary,
            length,
        }
    }

    pub fn random_key(length: usize) -> Self {
        GenomeSpec {
            kind: GenomeKind::RandomKey,
            length,
        }
    }

    /// True when `genome` has this variant, this length, and in-range keys.
    pub fn admits(&self, genome: &Genome) -> bool {
        genome.kind() == self.kind
            && genome.len() == self.length
            && match genome {
                Genome::Binary(_) => true,
                Genome::RandomKey(keys) => keys.iter().all(|k| (0.0..1.0).contains(k)),
            }
    }
}

impl Genome {
    pub fn kind(&self) -> GenomeKind {
        match self {
            Genome::Binary(_) => GenomeKind::Binary,
            Genome::RandomKey(_) => GenomeKind::RandomKey,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Genome::Binary(bits) => bits.len(),
            Genome::RandomKey(keys) => keys.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_bits(&self) -> Option<&[bool]> {
        match self {
            Genome::Binary(bits) => Some(bits),
            Genome::RandomKey(_) => None,
        }
    }

    pub fn as_keys(&self) -> Option<&[f64]> {
        match self {
            Genome::RandomKey(keys) => Some(keys),
            Genome::Binary(_) => None,
        }
    }

    /// Parses a `0`/`1` string, mostly for tests and fixtures.
    pub fn from_bit_str(s: &str) -> Option<Genome> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Genome::Binary)
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genome::Binary(bits) => {
                for &b in bits {
                    f.write_str(if b { "1" } else { "0" })?;
                }
                Ok(())
            }
            Genome::RandomKey(keys) => {
                f.write_str("[")?;
                for (i, k) in keys.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}")?;
                }
                f.write_str("]")
            }
        }
    }
}
