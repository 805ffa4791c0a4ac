use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::{HullMode, Philosophy, PredicateOptions};
use crate::syntax::{Constant, FAMILY_DEPTH_CAP};

/// Comprehension scheme relating `y in {x|A}` to `A(y)` and `Normal({x|A})`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Comprehension {
    /// Unrestricted: `y in t <-> A(y)`.
    #[serde(rename = "naive")]
    Naive,
    /// `y in t <-> (A(y) | ~N(t))`.
    #[default]
    #[serde(rename = "raBaDi")]
    RaBaDi,
    /// `y in t <-> (A(y) & N(t))`.
    #[serde(rename = "rinoBaCo")]
    RinoBaCo,
    /// `N(t) -> A y. (y in t <-> A(y))`.
    #[serde(rename = "noBI")]
    NoBI,
    /// `noBI` together with its re-implication.
    #[serde(rename = "noBE")]
    NoBE,
}

impl Comprehension {
    pub const ALL: [Comprehension; 5] = [
        Comprehension::Naive,
        Comprehension::RaBaDi,
        Comprehension::RinoBaCo,
        Comprehension::NoBI,
        Comprehension::NoBE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Comprehension::Naive => "naive",
            Comprehension::RaBaDi => "raBaDi",
            Comprehension::RinoBaCo => "rinoBaCo",
            Comprehension::NoBI => "noBI",
            Comprehension::NoBE => "noBE",
        }
    }
}

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Extensionality {
    /// Element-Equality: equal extensions make equal sets.
    #[default]
    #[serde(rename = "EE")]
    Ee,
    /// Normal-Elements-Equality: agreement on Normal members suffices.
    #[serde(rename = "NEE")]
    Nee,
    #[serde(rename = "none")]
    None,
}

/// Choice axioms are carried in presets but never evaluated.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Choice {
    #[default]
    #[serde(rename = "none")]
    None,
    /// Choice-function axiom.
    #[serde(rename = "BA4a")]
    ChoiceFunction,
    /// Choice-set axiom.
    #[serde(rename = "BA4b")]
    ChoiceSet,
    /// `On ~ us`.
    #[serde(rename = "BA4c")]
    OrdinalsUniversal,
    #[serde(rename = "BA4d")]
    Other,
}

impl Choice {
    pub fn name(self) -> Option<&'static str> {
        match self {
            Choice::None => None,
            Choice::ChoiceFunction => Some("BA4a"),
            Choice::ChoiceSet => Some("BA4b"),
            Choice::OrdinalsUniversal => Some("BA4c"),
            Choice::Other => Some("BA4d"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Fundamental {
    /// `Normal(omega)`.
    FA1,
    /// Power-set axiom.
    FA2,
    /// Union axiom.
    FA3,
    /// Image-set axiom, variant chosen by [`SystemConfig::fa4`].
    FA4,
}

/// Image-set axiom variants. `Delta` is accepted but never evaluated.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum ImageAxiom {
    /// Simple image set.
    #[default]
    Alfa,
    /// Image restricted to Normal-or-empty elements.
    Beta,
    /// Image restricted to Normal elements, no nonempty-image premise.
    Gamma,
    Delta,
    /// Domain admits no map onto its complement.
    Eta,
    /// Domain is slim.
    Phi,
    /// Domain is Mirimanoff.
    Psi,
    /// Domain is founded.
    Chi,
    /// Domain is hereditarily founded.
    Jota,
    /// Domain is Cantorian.
    Kappa,
    None,
}

impl ImageAxiom {
    pub fn name(self) -> &'static str {
        match self {
            ImageAxiom::Alfa => "alfa",
            ImageAxiom::Beta => "beta",
            ImageAxiom::Gamma => "gamma",
            ImageAxiom::Delta => "delta",
            ImageAxiom::Eta => "eta",
            ImageAxiom::Phi => "phi",
            ImageAxiom::Psi => "psi",
            ImageAxiom::Chi => "chi",
            ImageAxiom::Jota => "jota",
            ImageAxiom::Kappa => "kappa",
            ImageAxiom::None => "none",
        }
    }

    /// The domain-restricted forms, which may drop the `Normal(y)` filter.
    pub fn is_domain_restricted(self) -> bool {
        matches!(
            self,
            ImageAxiom::Eta
                | ImageAxiom::Phi
                | ImageAxiom::Psi
                | ImageAxiom::Chi
                | ImageAxiom::Jota
                | ImageAxiom::Kappa
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Eventuality {
    /// Singleton of `@` is Normal.
    EA1,
    /// Equivalent formulas give equal sets.
    EA2,
    /// Non-Normal sets are equipollent.
    EA3,
    /// Members of Normal sets are Normal or `@`.
    EA4,
    /// Members of Normal sets are Normal.
    EA5,
    /// Complements of Normal sets are Normal.
    EA6,
    /// Exactly one of a set and its complement is Normal.
    EA7,
    /// A set or its complement is Normal.
    EA8,
    /// `{x|A}` or `{x|Supplement-A}` is Normal.
    EA9,
    /// Complement of a Normal set is Normal or universal.
    KNoU,
}

impl Eventuality {
    pub const ALL: [Eventuality; 10] = [
        Eventuality::EA1,
        Eventuality::EA2,
        Eventuality::EA3,
        Eventuality::EA4,
        Eventuality::EA5,
        Eventuality::EA6,
        Eventuality::EA7,
        Eventuality::EA8,
        Eventuality::EA9,
        Eventuality::KNoU,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Eventuality::EA1 => "EA1",
            Eventuality::EA2 => "EA2",
            Eventuality::EA3 => "EA3",
            Eventuality::EA4 => "EA4",
            Eventuality::EA5 => "EA5",
            Eventuality::EA6 => "EA6",
            Eventuality::EA7 => "EA7",
            Eventuality::EA8 => "EA8",
            Eventuality::EA9 => "EA9",
            Eventuality::KNoU => "KNoU",
        }
    }

    pub fn from_name(s: &str) -> Option<Eventuality> {
        Eventuality::ALL.into_iter().find(|e| e.name() == s)
    }
}

/// The selected normality condition.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(try_from = "String", into = "String")]
pub enum NormalityCondition {
    #[default]
    None,
    /// NC1 ... NC16.
    Numbered(u8),
    /// Stratified bodies give Normal sets.
    Stratified,
}

impl fmt::Display for NormalityCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalityCondition::None => f.write_str("none"),
            NormalityCondition::Numbered(i) => write!(f, "NC{i}"),
            NormalityCondition::Stratified => f.write_str("stratified"),
        }
    }
}

impl FromStr for NormalityCondition {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let bad = || ConfigError::UnknownName(format!("normality condition '{s}'"));
        match s {
            "none" | "0" => Ok(NormalityCondition::None),
            "stratified" => Ok(NormalityCondition::Stratified),
            _ => {
                let digits = s.strip_prefix("NC").unwrap_or(s);
                let i: u8 = digits.parse().map_err(|_| bad())?;
                if i == 0 {
                    Ok(NormalityCondition::None)
                } else if (1..=16).contains(&i) {
                    Ok(NormalityCondition::Numbered(i))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl TryFrom<String> for NormalityCondition {
    type Error = ConfigError;

    fn try_from(s: String) -> Result<Self, ConfigError> {
        s.parse()
    }
}

impl From<NormalityCondition> for String {
    fn from(nc: NormalityCondition) -> String {
        nc.to_string()
    }
}

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Nc5Mode {
    /// No map onto the complement, or no map from the complement onto `x`.
    #[default]
    Disjunctive,
    /// No bijection with the complement.
    Bijection,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown {0}")]
    UnknownName(String),
    #[error("primed normality conditions exist only for NC5..NC8, not {0}")]
    Primed(NormalityCondition),
    #[error("dropping Normal(y) applies only to the domain-restricted image axioms, not FA4{0}")]
    DropNormalY(&'static str),
    #[error("family depth {0} exceeds the cap of {FAMILY_DEPTH_CAP}")]
    FamilyDepth(usize),
    #[error("the image-axiom family depth {0} exceeds the cap of {FAMILY_DEPTH_CAP}")]
    ImageFamilyDepth(usize),
    #[error("the '@' role can only be played by US or AT, not {0}")]
    AtTarget(Constant),
}

/// One point in the grid of systems: a comprehension variant plus the
/// selected axiom groups, normality condition and evaluation knobs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub comprehension: Comprehension,
    pub philosophy: Philosophy,
    pub extensionality: Extensionality,
    pub choice: Choice,
    pub fundamentals: BTreeSet<Fundamental>,
    pub fa4: ImageAxiom,
    /// The d..k forms: no `Normal(y)` filter inside the image set.
    pub drop_normal_y: bool,
    pub eventualities: BTreeSet<Eventuality>,
    pub nc: NormalityCondition,
    /// NC5'..NC8': also escape when `x = us` or `x = 0`.
    pub primed: bool,
    /// Which constant plays `@` in EA1 and EA4.
    pub at_target: Constant,
    pub family_depth: usize,
    /// Whether the formula family may mention `US`, `OM` and `AT`.
    pub family_constants: bool,
    /// Depth of the two-variable formula family feeding the image axioms.
    pub image_family_depth: usize,
    /// `p(x) := {y : y Subset x & Normal(y)}`.
    pub powerset_normal_only: bool,
    pub hull_mode: HullMode,
    pub nc5_mode: Nc5Mode,
    /// Treat an operator result with no realizing element as a violation.
    pub require_closure: bool,
    pub strict_founded: bool,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            name: None,
            comprehension: Comprehension::RaBaDi,
            philosophy: Philosophy::A,
            extensionality: Extensionality::Ee,
            choice: Choice::None,
            fundamentals: BTreeSet::new(),
            fa4: ImageAxiom::None,
            drop_normal_y: false,
            eventualities: BTreeSet::new(),
            nc: NormalityCondition::None,
            primed: false,
            at_target: Constant::At,
            family_depth: 1,
            family_constants: false,
            image_family_depth: 0,
            powerset_normal_only: false,
            hull_mode: HullMode::Downward,
            nc5_mode: Nc5Mode::Disjunctive,
            require_closure: false,
            strict_founded: false,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.primed && !matches!(self.nc, NormalityCondition::Numbered(5..=8)) {
            return Err(ConfigError::Primed(self.nc));
        }
        if self.drop_normal_y && !self.fa4.is_domain_restricted() {
            return Err(ConfigError::DropNormalY(self.fa4.name()));
        }
        if self.family_depth > FAMILY_DEPTH_CAP {
            return Err(ConfigError::FamilyDepth(self.family_depth));
        }
        if self.image_family_depth > FAMILY_DEPTH_CAP {
            return Err(ConfigError::ImageFamilyDepth(self.image_family_depth));
        }
        if self.at_target == Constant::Om {
            return Err(ConfigError::AtTarget(self.at_target));
        }
        Ok(())
    }

    pub fn predicate_options(&self) -> PredicateOptions {
        PredicateOptions {
            hull_mode: self.hull_mode,
            strict_founded: self.strict_founded,
            powerset_normal_only: self.powerset_normal_only,
        }
    }

    pub fn has(&self, fa: Fundamental) -> bool {
        self.fundamentals.contains(&fa)
    }

    pub fn has_ea(&self, ea: Eventuality) -> bool {
        self.eventualities.contains(&ea)
    }

    /// Display label: the preset name if any, else a compact description.
    pub fn label(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        let mut parts = vec![
            self.comprehension.name().to_string(),
            self.philosophy.to_string(),
        ];
        match self.extensionality {
            Extensionality::Ee => parts.push("EE".into()),
            Extensionality::Nee => parts.push("NEE".into()),
            Extensionality::None => {}
        }
        for fa in &self.fundamentals {
            parts.push(match fa {
                Fundamental::FA4 => format!("FA4{}", self.fa4.name()),
                other => format!("{other:?}"),
            });
        }
        parts.extend(self.eventualities.iter().map(|e| e.name().to_string()));
        if self.nc != NormalityCondition::None {
            parts.push(format!("{}{}", self.nc, if self.primed { "'" } else { "" }));
        }
        parts.join("+")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> SystemConfig {
        self.name = Some(name.into());
        self
    }
}

pub const PRESET_NAMES: [&str; 12] = [
    "NAM0a",
    "NAM0b",
    "NAM0c",
    "NAM1a",
    "NAM1b",
    "NAM1c",
    "NAM2a",
    "NAM2b",
    "NAM2c",
    "NAM1aKNoU",
    "NAM2cKN",
    "NAM-ZF",
];

fn all_fundamentals() -> BTreeSet<Fundamental> {
    [
        Fundamental::FA1,
        Fundamental::FA2,
        Fundamental::FA3,
        Fundamental::FA4,
    ]
    .into_iter()
    .collect()
}

fn kernel(comprehension: Comprehension, fa4: ImageAxiom) -> SystemConfig {
    SystemConfig {
        comprehension,
        philosophy: Philosophy::A,
        extensionality: Extensionality::Ee,
        choice: Choice::OrdinalsUniversal,
        fundamentals: all_fundamentals(),
        fa4,
        ..SystemConfig::default()
    }
}

/// The frozen named systems.
///
/// - `NAM0a/b/c`: the condition-free kernels over raBaDi / rinoBaCo / noBI.
/// - `NAM1x` / `NAM2x`: the kernels plus NC1 / NC2. The `b` and `c` series
///   add EA1..EA3 with `@` played by `AT`.
/// - `NAM1aKNoU`: NAM1a plus KNoU, with the image axiom restricted to slim
///   domains.
/// - `NAM2cKN`: NAM2c plus EA6.
/// - `NAM-ZF`: raBaDi with EE, choice and the four fundamental axioms; the
///   same axioms as NAM0a.
///
/// NAM1a lists nine items: the set operator (implicit in the denotation
/// table), raBaDi, EE, choice (not evaluated), FA1..FA3, the image axiom and
/// NC1.
pub fn preset(name: &str) -> Option<SystemConfig> {
    let three_eas: BTreeSet<Eventuality> = [Eventuality::EA1, Eventuality::EA2, Eventuality::EA3]
        .into_iter()
        .collect();
    let with_nc = |mut c: SystemConfig, nc: u8, eas: bool| {
        c.nc = NormalityCondition::Numbered(nc);
        if eas {
            c.eventualities = three_eas.clone();
        }
        c
    };
    let a = kernel(Comprehension::RaBaDi, ImageAxiom::Alfa);
    let b = kernel(Comprehension::RinoBaCo, ImageAxiom::Beta);
    let c = kernel(Comprehension::NoBI, ImageAxiom::Beta);
    let config = match name {
        "NAM0a" | "NAM-ZF" => a,
        "NAM0b" => b,
        "NAM0c" => c,
        "NAM1a" => with_nc(a, 1, false),
        "NAM1b" => with_nc(b, 1, true),
        "NAM1c" => with_nc(c, 1, true),
        "NAM2a" => with_nc(a, 2, false),
        "NAM2b" => with_nc(b, 2, true),
        "NAM2c" => with_nc(c, 2, true),
        "NAM1aKNoU" => {
            let mut cfg = with_nc(a, 1, false);
            cfg.fa4 = ImageAxiom::Phi;
            cfg.eventualities.insert(Eventuality::KNoU);
            cfg
        }
        "NAM2cKN" => {
            let mut cfg = with_nc(c, 2, true);
            cfg.eventualities.insert(Eventuality::EA6);
            cfg
        }
        _ => return None,
    };
    Some(config.with_name(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_exists_and_validates() {
        for name in PRESET_NAMES {
            let cfg = preset(name).unwrap_or_else(|| panic!("missing {name}"));
            cfg.validate().unwrap();
            assert_eq!(cfg.label(), name);
        }
        assert!(preset("NAM9z").is_none());
    }

    #[test]
    fn primed_only_for_five_to_eight() {
        let mut cfg = SystemConfig {
            nc: NormalityCondition::Numbered(6),
            primed: true,
            ..SystemConfig::default()
        };
        cfg.validate().unwrap();
        cfg.nc = NormalityCondition::Numbered(9);
        assert_eq!(
            cfg.validate(),
            Err(ConfigError::Primed(NormalityCondition::Numbered(9)))
        );
    }

    #[test]
    fn drop_normal_y_needs_restricted_domain() {
        let mut cfg = SystemConfig {
            fa4: ImageAxiom::Alfa,
            drop_normal_y: true,
            ..SystemConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg.fa4 = ImageAxiom::Kappa;
        cfg.validate().unwrap();
    }

    #[test]
    fn nc_names() {
        assert_eq!("NC7".parse(), Ok(NormalityCondition::Numbered(7)));
        assert_eq!("12".parse(), Ok(NormalityCondition::Numbered(12)));
        assert_eq!("0".parse(), Ok(NormalityCondition::None));
        assert_eq!("stratified".parse(), Ok(NormalityCondition::Stratified));
        assert!("NC17".parse::<NormalityCondition>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let cfg = preset("NAM2cKN").unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: SystemConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        let partial: SystemConfig =
            serde_json::from_str(r#"{"comprehension":"rinoBaCo","nc":"NC9"}"#).unwrap();
        assert_eq!(partial.comprehension, Comprehension::RinoBaCo);
        assert_eq!(partial.nc, NormalityCondition::Numbered(9));
        assert!(serde_json::from_str::<SystemConfig>(r#"{"bogus":1}"#).is_err());
    }
}
