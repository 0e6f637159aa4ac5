//! The two supported OEIS sequences, their bundled fixtures, and the
//! fetch-and-cache path.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sinelcm::numtheory::{lcm_bar, lcm_upto};

use crate::bfile::BFile;

pub const BASE_ENV: &str = "SINELCM_OEIS_BASE";
pub const DEFAULT_BASE: &str = "https://oeis.org";

const FIXTURE_A003418: &str = include_str!("../fixtures/b003418.txt");
const FIXTURE_A048671: &str = include_str!("../fixtures/b048671.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sequence {
    /// `lcm(1..n)`, from `n = 0`.
    A003418,
    /// lcm of the proper divisors of `n`, from `n = 1`.
    A048671,
}

impl Sequence {
    pub fn from_id(id: &str) -> Option<Sequence> {
        match id {
            "A003418" => Some(Sequence::A003418),
            "A048671" => Some(Sequence::A048671),
            _ => None,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Sequence::A003418 => "A003418",
            Sequence::A048671 => "A048671",
        }
    }

    pub fn offset(self) -> u64 {
        match self {
            Sequence::A003418 => 0,
            Sequence::A048671 => 1,
        }
    }

    /// The exact value at `n >= offset`.
    pub fn oracle(self, n: u64) -> BigInt {
        match self {
            Sequence::A003418 => lcm_upto(n),
            Sequence::A048671 => lcm_bar(n),
        }
    }

    pub fn fixture(self) -> &'static str {
        match self {
            Sequence::A003418 => FIXTURE_A003418,
            Sequence::A048671 => FIXTURE_A048671,
        }
    }

    /// `b003418.txt` and so on.
    pub fn bfile_name(self) -> String {
        format!("b{}.txt", &self.id()[1..])
    }

    pub fn url(self, base: &str) -> String {
        format!("{}/{}/{}", base.trim_end_matches('/'), self.id(), self.bfile_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Fixture,
    Cache,
    Network,
}

#[derive(Debug)]
pub struct FetchError(pub String);

impl fmt::Display for FetchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Where cached b-files live unless `--cache-dir` says otherwise.
pub fn default_cache_dir() -> PathBuf {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(x).join("sinelcm");
    }
    if let Some(h) = std::env::var_os("HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(h).join(".cache").join("sinelcm");
    }
    std::env::temp_dir().join("sinelcm")
}

pub fn cache_path(dir: &Path, seq: Sequence) -> PathBuf {
    dir.join(format!("{}.txt", seq.id()))
}

/// Largest b-file body accepted from the network.
const BODY_LIMIT: u64 = 256 << 20;

fn fetch(url: &str) -> Result<String, FetchError> {
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs(60)))
        .build()
        .into();
    let mut resp = agent
        .get(url)
        .call()
        .map_err(|e| FetchError(format!("GET {url}: {e}")))?;
    resp.body_mut()
        .with_config()
        .limit(BODY_LIMIT)
        .read_to_string()
        .map_err(|e| FetchError(format!("GET {url}: reading body: {e}")))
}

/// The b-file body for `seq` and where it came from.
///
/// Offline mode reads the bundled fixture and touches neither the network
/// nor the cache. Otherwise a cached copy is used unless `refresh` is set;
/// a fetched body is stored verbatim. Failing to write the cache is
/// reported through `warn` but does not fail the load.
pub fn load(
    seq: Sequence,
    offline: bool,
    refresh: bool,
    base: &str,
    cache_dir: &Path,
    warn: &mut dyn FnMut(String),
) -> Result<(String, Source), FetchError> {
    if offline {
        return Ok((seq.fixture().to_string(), Source::Fixture));
    }
    let path = cache_path(cache_dir, seq);
    if !refresh {
        if let Ok(body) = fs::read_to_string(&path) {
            return Ok((body, Source::Cache));
        }
    }
    let body = fetch(&seq.url(base))?;
    if let Err(e) = fs::create_dir_all(cache_dir).and_then(|_| fs::write(&path, &body)) {
        warn(format!("could not write cache {}: {e}", path.display()));
    }
    Ok((body, Source::Network))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: u64,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub sequence: String,
    pub source: Source,
    pub upto: u64,
    /// Entries with `offset <= index <= upto` that were compared.
    pub checked: u64,
    /// Indices in range the b-file does not list.
    pub missing: u64,
    pub mismatches: Vec<Mismatch>,
}

/// Compares every listed index up to `upto` against the oracle.
pub fn compare(seq: Sequence, b: &BFile, upto: u64, source: Source) -> Comparison {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for (i, v) in b.entries() {
        if *i > upto {
            break;
        }
        if *i < seq.offset() {
            continue;
        }
        checked += 1;
        let want = seq.oracle(*i);
        if &want != v {
            mismatches.push(Mismatch {
                index: *i,
                expected: want.to_string(),
                found: v.to_string(),
            });
        }
    }
    let span = (upto + 1).saturating_sub(seq.offset());
    Comparison {
        sequence: seq.id().to_string(),
        source,
        upto,
        checked,
        missing: span - checked,
        mismatches,
    }
}
