//! Session parameters shared by the command-line tools, and the working
//! level rule: `p^N` must be a multiple of the p-exponent of every group in
//! play, and `N` must cover the largest kernel `p^{floor(log_p m)}` a
//! section is asked for.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use crate::class_function::{check_group_level, C0Level};
use crate::error::{Error, Result};
use crate::group::{enumerate_hom_classes, FiniteGroup, HomClasses};
use crate::isogeny::{canonical_section, random_section, Section, SectionKind};
use crate::power::section_bound;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    pub p: u64,
    pub n: usize,
    pub level: u32,
    pub section: SectionKind,
    pub group: String,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            p: 2,
            n: 2,
            level: 2,
            section: SectionKind::Canonical,
            group: "C1".into(),
            seed: 0,
            format: OutputFormat::Json,
            out: None,
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Smallest `N` with `p^N ≥ e` (equivalently `e | p^N` for a p-power `e`).
pub fn level_for_exponent(p: u64, e: u64) -> u32 {
    let mut n = 0;
    while p.pow(n) < e {
        n += 1;
    }
    n
}

/// Smallest admissible level for power operations of degree `m` on `group`;
/// with `total` the wreath product `group ≀ Σ_m` is taken into account too.
pub fn required_level(group: &FiniteGroup, p: u64, m: usize, total: bool) -> Result<u32> {
    let mut need = level_for_exponent(p, group.p_exponent(p)).max(section_bound(p, m));
    let top = FiniteGroup::symmetric(m)?;
    need = need.max(level_for_exponent(p, top.p_exponent(p)));
    if total {
        let wreath = FiniteGroup::wreath(&Arc::new(group.clone()), m)?;
        need = need.max(level_for_exponent(p, wreath.p_exponent(p)));
    }
    Ok(need)
}

impl SessionConfig {
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::Parse(format!("p = {} is not prime", self.p)));
        }
        if self.n == 0 || self.n > 4 {
            return Err(Error::Parse(format!("n = {} is outside 1..=4", self.n)));
        }
        Ok(())
    }

    pub fn c0_level(&self) -> C0Level {
        C0Level::new(self.p, self.n, self.level)
    }

    pub fn build_group(&self) -> Result<Arc<FiniteGroup>> {
        FiniteGroup::parse(&self.group)
    }

    /// The section requested by the configuration, defined up to `p^bound`.
    pub fn section(&self, bound: u32) -> Section {
        match self.section {
            SectionKind::Canonical => canonical_section(self.p, self.n, bound),
            SectionKind::Seeded(seed) => random_section(self.p, self.n, bound, seed),
        }
    }
}

/// A validated configuration for power operations of a fixed degree.
pub struct Session {
    pub config: SessionConfig,
    pub m: usize,
    pub total: bool,
    pub classes: Arc<HomClasses>,
    pub level: C0Level,
}

impl Session {
    pub fn new(config: SessionConfig, m: usize, total: bool) -> Result<Self> {
        config.validate()?;
        if m == 0 {
            return Err(Error::Parse("m must be positive".into()));
        }
        let group = config.build_group()?;
        let need = required_level(&group, config.p, m, total)?;
        if config.level < need {
            return Err(Error::LevelMismatch(format!(
                "{} with m = {m}{} at p = {} needs level N >= {need}, got {}",
                group.name(),
                if total { " (total)" } else { "" },
                config.p,
                config.level
            )));
        }
        let classes = Arc::new(enumerate_hom_classes(&group, config.n, config.p)?);
        let level = config.c0_level();
        check_group_level(&classes, level)?;
        Ok(Session {
            config,
            m,
            total,
            classes,
            level,
        })
    }

    pub fn section(&self) -> Section {
        self.config.section(section_bound(self.config.p, self.m))
    }
}
