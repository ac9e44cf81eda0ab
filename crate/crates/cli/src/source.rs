//! Graph source strings: `cycle:<n>`, `named:<name>`,
//! `random:<n>,<d>,<girth>,<seed>`, `file:<path>`.

use std::fmt;
use std::str::FromStr;

use lmc_core::graph::{make_cycle, make_named, make_random_regular, Graph, NamedGraph};
use lmc_core::{LmcError, Result};

pub const RANDOM_MAX_ATTEMPTS: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Cycle(usize),
    Named(NamedGraph),
    Random {
        n: usize,
        d: usize,
        girth: usize,
        seed: u64,
    },
    File(String),
}

impl GraphSource {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSource::Cycle(n) => make_cycle(*n),
            GraphSource::Named(name) => Ok(make_named(*name)),
            GraphSource::Random { n, d, girth, seed } => {
                make_random_regular(*n, *d, *girth, *seed, RANDOM_MAX_ATTEMPTS)
            }
            GraphSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| LmcError::InvalidGraph(format!("cannot read {path}: {e}")))?;
                Graph::from_edge_list(&text)
            }
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSource::Named(name) => write!(f, "named:{name}"),
            GraphSource::Random { n, d, girth, seed } => write!(f, "random:{n},{d},{girth},{seed}"),
            GraphSource::File(path) => write!(f, "file:{path}"),
        }
    }
}

fn bad(s: &str, why: &str) -> String {
    format!("invalid graph source '{s}': {why}")
}

impl FromStr for GraphSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| bad(s, "expected <kind>:<argument>"))?;
        match kind {
            "cycle" => arg
                .parse()
                .map(GraphSource::Cycle)
                .map_err(|_| bad(s, "cycle length must be an integer")),
            "named" => arg
                .parse()
                .map(GraphSource::Named)
                .map_err(|e: LmcError| bad(s, &e.to_string())),
            "random" => {
                let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    return Err(bad(s, "expected random:<n>,<d>,<girth>,<seed>"));
                }
                let num = |x: &str| x.parse::<u64>().map_err(|_| bad(s, "non-integer field"));
                Ok(GraphSource::Random {
                    n: num(parts[0])? as usize,
                    d: num(parts[1])? as usize,
                    girth: num(parts[2])? as usize,
                    seed: num(parts[3])?,
                })
            }
            "file" if !arg.is_empty() => Ok(GraphSource::File(arg.to_string())),
            _ => Err(bad(s, "kind must be cycle, named, random or file")),
        }
    }
}
