//! Finite presentations and their text format.
//!
//! ```text
//! # genus-2 surface group
//! generators: a b c d
//! relators: abABcdCD
//! delta: 2
//! dehn: trusted
//! ```
//!
//! `relators:` may repeat; `delta:` and `dehn:` are optional. Relators are
//! stored freely and cyclically reduced, sorted and deduplicated.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::words::{Alphabet, Letter, Word, MAX_GENERATORS};
use crate::{Error, Result};

/// How far a presentation is trusted to be a Dehn presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DehnStatus {
    /// Asserted by the presentation file.
    Trusted,
    /// Certified by the C'(1/6) small-cancellation check.
    VerifiedC16,
    Unverified,
}

impl fmt::Display for DehnStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DehnStatus::Trusted => "trusted",
            DehnStatus::VerifiedC16 => "verified-C16",
            DehnStatus::Unverified => "unverified",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
    delta: Option<u32>,
    dehn_status: DehnStatus,
}

impl Presentation {
    /// Builds a presentation, reducing relators and rejecting ones that vanish.
    pub fn new(alphabet: Alphabet, relators: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut stored = Vec::new();
        for r in relators {
            alphabet.check_word(&r)?;
            let r = r.cyclically_reduced();
            if r.is_empty() {
                return Err(Error::Precondition("relator reduces to the empty word".into()));
            }
            stored.push(r);
        }
        stored.sort();
        stored.dedup();
        Ok(Presentation { alphabet, relators: stored, delta: None, dehn_status: DehnStatus::Unverified })
    }

    /// Free group on the first `rank` letters.
    pub fn free(rank: usize) -> Self {
        Presentation {
            alphabet: Alphabet::standard(rank),
            relators: Vec::new(),
            delta: None,
            dehn_status: DehnStatus::Unverified,
        }
    }

    pub fn with_delta(mut self, delta: Option<u32>) -> Self {
        self.delta = delta;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn delta(&self) -> Option<u32> {
        self.delta
    }

    pub fn dehn_status(&self) -> DehnStatus {
        self.dehn_status
    }

    pub fn set_dehn_status(&mut self, status: DehnStatus) {
        self.dehn_status = status;
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.alphabet.parse_word(text)
    }

    /// Parses the presentation file format. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut relators = Vec::new();
        let mut delta = None;
        let mut trusted = false;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| Error::Parse { line, message };
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let Some((key, value)) = content.split_once(':') else {
                return Err(err(format!("expected `key: value`, found `{content}`")));
            };
            match key.trim() {
                "generators" => {
                    if alphabet.is_some() {
                        return Err(err("generators declared twice".into()));
                    }
                    let mut gens = Vec::new();
                    let mut seen = [false; MAX_GENERATORS];
                    for tok in value.split_whitespace() {
                        let mut chars = tok.chars();
                        let (Some(c), None) = (chars.next(), chars.next()) else {
                            return Err(err(format!("generator `{tok}` is not a single letter")));
                        };
                        if !c.is_ascii_lowercase() {
                            return Err(err(format!("generator `{c}` must be a lowercase ASCII letter")));
                        }
                        let g = c as usize - 'a' as usize;
                        if seen[g] {
                            return Err(err(format!("duplicate generator '{c}'")));
                        }
                        seen[g] = true;
                        gens.push(g);
                    }
                    alphabet = Some(Alphabet::new(gens)?);
                }
                "relators" => {
                    let Some(alpha) = alphabet.as_ref() else {
                        return Err(err("relators before generators".into()));
                    };
                    for tok in value.split_whitespace() {
                        let word = Word::parse(tok).map_err(|e| err(e.to_string()))?;
                        if let Some(bad) = word.letters().iter().find(|l| !alpha.contains(**l)) {
                            return Err(err(format!("unknown letter '{}' in relator `{tok}`", bad.to_char())));
                        }
                        let reduced = word.cyclically_reduced();
                        if reduced.is_empty() {
                            return Err(err(format!("relator `{tok}` reduces to the empty word")));
                        }
                        relators.push(reduced);
                    }
                }
                "delta" => {
                    let v = value.trim();
                    delta = Some(v.parse::<u32>().map_err(|_| err(format!("delta `{v}` is not a non-negative integer")))?);
                }
                "dehn" => match value.trim() {
                    "trusted" => trusted = true,
                    "unverified" => trusted = false,
                    other => return Err(err(format!("unknown dehn status `{other}`"))),
                },
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }

        let Some(alphabet) = alphabet else {
            return Err(Error::Parse { line: text.lines().count().max(1), message: "missing `generators:` line".into() });
        };
        relators.sort();
        relators.dedup();
        Ok(Presentation {
            alphabet,
            relators,
            delta,
            dehn_status: if trusted { DehnStatus::Trusted } else { DehnStatus::Unverified },
        })
    }
}

/// Serializes in the file format; `verified-C16` is not written since it is
/// recomputed on demand.
impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("generators:")?;
        for &g in self.alphabet.generators() {
            write!(f, " {}", Letter::new(g, false))?;
        }
        f.write_str("\nrelators:")?;
        for r in &self.relators {
            write!(f, " {r}")?;
        }
        f.write_str("\n")?;
        if let Some(d) = self.delta {
            writeln!(f, "delta: {d}")?;
        }
        if self.dehn_status == DehnStatus::Trusted {
            writeln!(f, "dehn: trusted")?;
        }
        Ok(())
    }
}

/// Parses the presentation file format.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    Presentation::parse(text)
}
