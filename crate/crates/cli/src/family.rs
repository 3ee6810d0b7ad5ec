//! Named target sets.

use std::fmt;
use std::str::FromStr;

use ffdecomp_core::fpcore::{primitive_roots, PrimeField, Subgroup};
use ffdecomp_core::FpSet;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `qr`, `subgroup:d` (or `subgroup` with the index given separately),
/// `primroots`, `interval:m,n` = `{m+1, …, m+n}`, or a literal `p:{…}` /
/// `{…}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SetSpec {
    Qr,
    Subgroup(Option<u32>),
    PrimRoots,
    Interval {
        m: u64,
        n: u64,
    },
    Literal {
        modulus: Option<u32>,
        elems: Vec<u32>,
    },
}

impl SetSpec {
    /// Fill in a missing subgroup index.
    pub fn with_index(self, d: Option<u32>) -> Result<Self, CliError> {
        match (self, d) {
            (SetSpec::Subgroup(None), Some(d)) => Ok(SetSpec::Subgroup(Some(d))),
            (SetSpec::Subgroup(None), None) => Err(CliError::usage(
                "--set subgroup needs an index: use subgroup:D or --d D",
            )),
            (SetSpec::Subgroup(Some(a)), Some(b)) if a != b => Err(CliError::usage(format!(
                "--set subgroup:{a} conflicts with --d {b}"
            ))),
            (s, _) => Ok(s),
        }
    }

    pub fn build(&self, field: &PrimeField) -> Result<FpSet, CliError> {
        let p = field.p();
        Ok(match self {
            SetSpec::Qr => Subgroup::new(field, 2)?.into_elements(),
            SetSpec::Subgroup(Some(d)) => Subgroup::new(field, *d)?.into_elements(),
            SetSpec::Subgroup(None) => {
                return Err(CliError::usage("subgroup index missing"));
            }
            SetSpec::PrimRoots => primitive_roots(field),
            SetSpec::Interval { m, n } => {
                if *n == 0 || *n > p as u64 {
                    return Err(CliError::usage(format!(
                        "--set interval length must lie in 1..={p}"
                    )));
                }
                FpSet::interval(p, m + 1, *n)
            }
            SetSpec::Literal { modulus, elems } => {
                if modulus.is_some_and(|m| m != p) {
                    return Err(CliError::usage(format!(
                        "--set literal modulus {} differs from --prime {p}",
                        modulus.unwrap()
                    )));
                }
                if let Some(&bad) = elems.iter().find(|&&e| e >= p) {
                    return Err(CliError::usage(format!(
                        "--set element {bad} is not reduced modulo {p}"
                    )));
                }
                FpSet::from_elements(p, elems.iter().copied())
            }
        })
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map_err(|_| format!("bad element `{t}`")))
        .collect()
}

impl FromStr for SetSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "qr" => return Ok(SetSpec::Qr),
            "primroots" => return Ok(SetSpec::PrimRoots),
            "subgroup" => return Ok(SetSpec::Subgroup(None)),
            _ => {}
        }
        if let Some(d) = s.strip_prefix("subgroup:") {
            let d = d
                .parse()
                .map_err(|_| format!("bad subgroup index in `{s}`"))?;
            return Ok(SetSpec::Subgroup(Some(d)));
        }
        if let Some(rest) = s.strip_prefix("interval:") {
            let parts: Vec<&str> = rest.split(',').collect();
            let [m, n] = parts[..] else {
                return Err(format!("expected interval:m,n, got `{s}`"));
            };
            let parse = |t: &str| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("bad interval bound `{t}`"))
            };
            return Ok(SetSpec::Interval {
                m: parse(m)?,
                n: parse(n)?,
            });
        }
        let (modulus, body) = match s.split_once(':') {
            Some((m, body)) => (
                Some(
                    m.trim()
                        .parse::<u32>()
                        .map_err(|_| format!("bad modulus in `{s}`"))?,
                ),
                body.trim(),
            ),
            None => (None, s),
        };
        let inner = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| format!("unknown set `{s}` (expected qr, subgroup:d, primroots, interval:m,n or {{...}})"))?;
        Ok(SetSpec::Literal {
            modulus,
            elems: parse_list(inner)?,
        })
    }
}

impl TryFrom<String> for SetSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<SetSpec> for String {
    fn from(s: SetSpec) -> String {
        s.to_string()
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Qr => f.write_str("qr"),
            SetSpec::Subgroup(None) => f.write_str("subgroup"),
            SetSpec::Subgroup(Some(d)) => write!(f, "subgroup:{d}"),
            SetSpec::PrimRoots => f.write_str("primroots"),
            SetSpec::Interval { m, n } => write!(f, "interval:{m},{n}"),
            SetSpec::Literal { modulus, elems } => {
                if let Some(m) = modulus {
                    write!(f, "{m}:")?;
                }
                let body: Vec<String> = elems.iter().map(u32::to_string).collect();
                write!(f, "{{{}}}", body.join(","))
            }
        }
    }
}

/// Comma-separated list such as `1,2,5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementList(pub Vec<u32>);

impl FromStr for ElementList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_list(s).map(ElementList)
    }
}
