//! OEIS b-files: plain text, one `index value` pair per line.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    sequence_id: String,
    entries: Vec<(u64, BigInt)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BFileError {
    BadId(String),
    BadLine { line: usize, text: String },
    NotIncreasing { line: usize, index: u64, previous: u64 },
}

impl fmt::Display for BFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BFileError::BadId(id) => write!(f, "`{id}` is not a sequence id (A followed by 6 digits)"),
            BFileError::BadLine { line, text } => write!(f, "line {line}: expected `index value`, got `{text}`"),
            BFileError::NotIncreasing { line, index, previous } => {
                write!(f, "line {line}: index {index} does not follow {previous}")
            }
        }
    }
}

impl std::error::Error for BFileError {}

/// `A` followed by exactly six digits.
pub fn is_sequence_id(s: &str) -> bool {
    s.len() == 7 && s.starts_with('A') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

impl BFile {
    /// Parses b-file text. Blank lines and lines starting with `#` are
    /// skipped; trailing whitespace is ignored.
    pub fn parse(sequence_id: &str, text: &str) -> Result<BFile, BFileError> {
        if !is_sequence_id(sequence_id) {
            return Err(BFileError::BadId(sequence_id.to_string()));
        }
        let mut entries: Vec<(u64, BigInt)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || BFileError::BadLine {
                line: i + 1,
                text: raw.to_string(),
            };
            let mut parts = line.split_whitespace();
            let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad());
            };
            let index = u64::from_str(idx).map_err(|_| bad())?;
            let value = BigInt::from_str(val).map_err(|_| bad())?;
            if let Some(&(previous, _)) = entries.last() {
                if index <= previous {
                    return Err(BFileError::NotIncreasing {
                        line: i + 1,
                        index,
                        previous,
                    });
                }
            }
            entries.push((index, value));
        }
        Ok(BFile {
            sequence_id: sequence_id.to_string(),
            entries,
        })
    }

    pub fn sequence_id(&self) -> &str {
        &self.sequence_id
    }

    pub fn entries(&self) -> &[(u64, BigInt)] {
        &self.entries
    }

    pub fn get(&self, index: u64) -> Option<&BigInt> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }
}

/// b-file text for `(index, value)` pairs, with one comment line on top.
pub fn render(comment: &str, entries: impl IntoIterator<Item = (u64, BigInt)>) -> String {
    let mut s = format!("# {comment}\n");
    for (i, v) in entries {
        s.push_str(&format!("{i} {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_trailing_space() {
        let b = BFile::parse("A003418", "# header\n\n0 1  \n1 1\n2 2\t\n#tail\n").unwrap();
        assert_eq!(b.entries().len(), 3);
        assert_eq!(b.get(2), Some(&BigInt::from(2)));
        assert_eq!(b.get(7), None);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(BFile::parse("A3418", ""), Err(BFileError::BadId(_))));
        assert!(matches!(BFile::parse("A003418", "1 x\n"), Err(BFileError::BadLine { line: 1, .. })));
        assert!(matches!(BFile::parse("A003418", "1 2 3\n"), Err(BFileError::BadLine { .. })));
        assert!(matches!(
            BFile::parse("A003418", "2 2\n2 2\n"),
            Err(BFileError::NotIncreasing { line: 2, .. })
        ));
    }

    #[test]
    fn render_parses_back() {
        let text = render("test", (1..=5).map(|i| (i, BigInt::from(i * i))));
        let b = BFile::parse("A000290", &text).unwrap();
        assert_eq!(b.get(4), Some(&BigInt::from(16)));
    }

    #[test]
    fn sequence_ids() {
        assert!(is_sequence_id("A048671"));
        assert!(!is_sequence_id("a048671"));
        assert!(!is_sequence_id("A04867"));
        assert!(!is_sequence_id("A0486711"));
    }
}
