//! Solver and generator parameters shared by the command line and the
//! bench suite format. Field names match the command line flags.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use clawpack::circular::CircularMode;
use clawpack::generators::{
    gen_alternating_cycle, gen_berman_tight, gen_high_girth_regular, gen_incidence_lowerbound, gen_random_packing,
    Family, LowerBoundParams, WeightDist,
};
use clawpack::scalar::rational_serde;
use clawpack::search::{Mode, SolverConfig};
use clawpack::{parse_rational, Exponent, Instance, Rational};
use serde::{Deserialize, Serialize};

/// Attempts allowed when sampling a high-girth host graph.
const GIRTH_BUDGET: u64 = 10_000;

pub fn parse_q(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Greedy,
    Squareimp,
    Logimp,
    Param,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Greedy => "greedy",
            Algo::Squareimp => "squareimp",
            Algo::Logimp => "logimp",
            Algo::Param => "param",
        }
    }

    fn mode(self) -> Mode {
        match self {
            Algo::Greedy => Mode::Greedy,
            Algo::Squareimp => Mode::SquareImp,
            Algo::Logimp => Mode::LogImp,
            Algo::Param => Mode::Parametrized,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CcMode {
    Rand,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SolveOptions {
    #[arg(long, value_enum, default_value = "logimp")]
    pub algo: Algo,
    /// Exponent for `param`.
    #[arg(long, value_parser = parse_q)]
    #[serde(default, with = "rational_serde::option", skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Rational>,
    /// Size cap factor for `param`.
    #[arg(long, value_parser = parse_q)]
    #[serde(default, with = "rational_serde::option", skip_serializing_if = "Option::is_none")]
    pub cap_c: Option<Rational>,
    /// Scale and truncate weights with this constant first.
    #[arg(long, value_parser = parse_q)]
    #[serde(default, with = "rational_serde::option", skip_serializing_if = "Option::is_none")]
    pub scale_n: Option<Rational>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cc_t: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cc_reps: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cc_maxlen: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cc_ycap: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cc_mode: Option<CcMode>,
}

impl SolveOptions {
    pub fn new(algo: Algo) -> Self {
        SolveOptions {
            algo,
            alpha: None,
            cap_c: None,
            scale_n: None,
            max_iters: None,
            cc_t: None,
            cc_reps: None,
            cc_maxlen: None,
            cc_ycap: None,
            cc_mode: None,
        }
    }

    pub fn config(&self, seed: u64) -> Result<SolverConfig> {
        let mut cfg = SolverConfig::new(self.algo.mode());
        cfg.seed = seed;
        if let Some(a) = &self.alpha {
            cfg.exponent = Exponent::power(a.clone())?;
        }
        if let Some(c) = &self.cap_c {
            cfg.cap_factor = c.clone();
        }
        cfg.scaling = self.scale_n.clone();
        cfg.max_iterations = self.max_iters;
        let cc = &mut cfg.circular;
        cc.t = self.cc_t.or(cc.t);
        cc.repetitions = self.cc_reps.or(cc.repetitions);
        cc.max_cycle_len = self.cc_maxlen.or(cc.max_cycle_len);
        cc.y_cap = self.cc_ycap.unwrap_or(cc.y_cap);
        if let Some(m) = self.cc_mode {
            cc.mode = match m {
                CcMode::Rand => CircularMode::Randomized,
                CcMode::Exhaustive => CircularMode::Exhaustive,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Short row label such as `param(alpha=1/1;C=2/1)` or `logimp/N=2/1`.
    pub fn label(&self) -> String {
        let mut s = self.algo.name().to_string();
        let mut inner = Vec::new();
        if let Some(a) = &self.alpha {
            inner.push(format!("alpha={a}"));
        }
        if let Some(c) = &self.cap_c {
            inner.push(format!("C={c}"));
        }
        if !inner.is_empty() {
            s += &format!("({})", inner.join(";"));
        }
        if let Some(n) = &self.scale_n {
            s += &format!("/N={n}");
        }
        s
    }
}

fn parse_weights(s: &str) -> Result<WeightDist> {
    let (kind, value) = s.split_once(':').ok_or_else(|| anyhow!("weights must look like `uniform:<max>`"))?;
    match kind {
        "uniform" => Ok(WeightDist::UniformInt { max: value.parse().context("uniform weight bound")? }),
        "near-unit" => Ok(WeightDist::near_unit(parse_rational(value)?)),
        other => bail!("unknown weight distribution `{other}`"),
    }
}

fn default_weights() -> String {
    "uniform:100".into()
}

/// A generator invocation.
#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "gen", rename_all = "lowercase")]
pub enum GenSpec {
    /// Tight example for claw-shaped local search.
    Berman {
        #[arg(long)]
        d: usize,
    },
    /// Cycle with alternating weights.
    Cycle {
        #[arg(long)]
        pairs: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_q)]
        #[serde(with = "rational_serde")]
        eps: Rational,
    },
    /// Vertex-edge incidence graph of a regular high-girth graph.
    Lowerbound {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_q)]
        #[serde(with = "rational_serde")]
        alpha: Rational,
        #[arg(long, value_parser = parse_q)]
        #[serde(with = "rational_serde")]
        eps: Rational,
        #[arg(long)]
        girth: usize,
        #[arg(long, default_value_t = 0)]
        #[serde(default)]
        seed: u64,
    },
    /// Random weighted k-set packing.
    Random {
        #[arg(long)]
        sets: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        seed: u64,
        /// `uniform:<max>` or `near-unit:<eta>`.
        #[arg(long, default_value = "uniform:100")]
        #[serde(default = "default_weights")]
        weights: String,
    },
}

pub struct Generated {
    pub instance: Instance,
    /// Designated solution and optimum, for the structured families.
    pub family: Option<Family>,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Generated> {
        let family = match self {
            GenSpec::Berman { d } => gen_berman_tight(*d)?,
            GenSpec::Cycle { pairs, d, eps } => gen_alternating_cycle(*pairs, *d, eps)?,
            GenSpec::Lowerbound { d, alpha, eps, girth, seed } => {
                let params = LowerBoundParams::new(*d, alpha.clone(), eps.clone(), *girth)?;
                let host = gen_high_girth_regular(d.saturating_sub(1), *girth, *seed, GIRTH_BUDGET)?;
                gen_incidence_lowerbound(&params, &host)?
            }
            GenSpec::Random { sets, k, universe, seed, weights } => {
                let p = gen_random_packing(*sets, *k, *universe, &parse_weights(weights)?, *seed)?;
                return Ok(Generated { instance: Instance::Packing(p), family: None });
            }
        };
        Ok(Generated { instance: family.instance.clone(), family: Some(family) })
    }

    pub fn label(&self) -> String {
        match self {
            GenSpec::Berman { d } => format!("berman-d{d}"),
            GenSpec::Cycle { pairs, d, eps } => format!("cycle-p{pairs}-d{d}-eps{eps}"),
            GenSpec::Lowerbound { d, alpha, eps, girth, seed } => {
                format!("lowerbound-d{d}-alpha{alpha}-eps{eps}-g{girth}-s{seed}")
            }
            GenSpec::Random { sets, k, universe, seed, weights } => {
                format!("random-n{sets}-k{k}-u{universe}-s{seed}-{weights}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_vocabulary_matches_flags() {
        let spec: GenSpec = serde_json::from_str(r#"{"gen":"cycle","pairs":3,"d":4,"eps":"1/2"}"#).unwrap();
        assert_eq!(spec, GenSpec::Cycle { pairs: 3, d: 4, eps: parse_q("0.5").unwrap() });
        let opts: SolveOptions = serde_json::from_str(r#"{"algo":"param","alpha":"1","cap-c":"3/2"}"#).unwrap();
        assert_eq!(opts.label(), "param(alpha=1;C=3/2)");
        assert_eq!(opts.config(0).unwrap().cap_factor, parse_q("3/2").unwrap());
    }

    #[test]
    fn weight_specs() {
        assert_eq!(parse_weights("uniform:7").unwrap(), WeightDist::UniformInt { max: 7 });
        assert!(parse_weights("gauss:1").is_err());
        assert!(parse_weights("uniform").is_err());
    }

    #[test]
    fn random_instances_have_no_family() {
        let spec = GenSpec::Random { sets: 5, k: 3, universe: 6, seed: 1, weights: default_weights() };
        let g = spec.generate().unwrap();
        assert!(g.family.is_none());
        assert_eq!(g.instance.len(), 5);
    }
}
