//! Scenario selection, resource caps and profiles.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Error, Result};

/// Environment variable selecting the resource-cap profile.
pub const PROFILE_ENV: &str = "KQ_PROFILE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScenarioId {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
    S10,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 10] = [
        ScenarioId::S1,
        ScenarioId::S2,
        ScenarioId::S3,
        ScenarioId::S4,
        ScenarioId::S5,
        ScenarioId::S6,
        ScenarioId::S7,
        ScenarioId::S8,
        ScenarioId::S9,
        ScenarioId::S10,
    ];

    pub fn title(self) -> &'static str {
        match self {
            ScenarioId::S1 => "adjunction sd ⊣ Ex",
            ScenarioId::S2 => "last-vertex maps are homology equivalences",
            ScenarioId::S3 => "horns in Ex(Y) extend in Ex²(Y)",
            ScenarioId::S4 => "Kan deficit along the truncated Ex tower",
            ScenarioId::S5 => "diag_! of a horn against its closed form",
            ScenarioId::S6 => "counit of diag_! and its fibers",
            ScenarioId::S7 => "small object argument over horn inclusions",
            ScenarioId::S8 => "cell presentations of monomorphisms",
            ScenarioId::S9 => "π_0-fibration probe",
            ScenarioId::S10 => "subdivision census against chain counting",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ScenarioId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown scenario {s:?}; expected one of S1..S10"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Small,
    Default,
    Large,
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "small" => Ok(Profile::Small),
            "default" | "" => Ok(Profile::Default),
            "large" => Ok(Profile::Large),
            other => Err(format!("unknown profile {other:?}; expected small, default or large")),
        }
    }
}

impl Profile {
    pub fn from_env() -> Result<Profile> {
        match std::env::var(PROFILE_ENV) {
            Ok(v) => v.parse().map_err(|message| Error::Config { line: 0, field: PROFILE_ENV.into(), message }),
            Err(_) => Ok(Profile::Default),
        }
    }
}

/// Resource caps shared by the scenarios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Horn and boundary dimension for S5, S6, S8 and S10.
    pub horn_dim: usize,
    /// Horn dimension for S3, S4 and S9.
    pub low_dim: usize,
    /// Dimension of the horn inclusions used by S7.
    pub soa_dim: usize,
    pub soa_rounds: usize,
    pub ex_stages: usize,
    pub trunc_dim: usize,
    pub sd_iterations: usize,
    /// Horizontal levels inspected by S6.
    pub level_dim: usize,
    /// Bidegree bound for S5.
    pub bidegree: usize,
    pub collapse_budget: usize,
}

const CAP_FIELDS: [&str; 10] = [
    "horn_dim",
    "low_dim",
    "soa_dim",
    "soa_rounds",
    "ex_stages",
    "trunc_dim",
    "sd_iterations",
    "level_dim",
    "bidegree",
    "collapse_budget",
];

impl Caps {
    pub fn for_profile(p: Profile) -> Caps {
        let default = Caps {
            horn_dim: 3,
            low_dim: 2,
            soa_dim: 2,
            soa_rounds: 3,
            ex_stages: 2,
            trunc_dim: 3,
            sd_iterations: 2,
            level_dim: 3,
            bidegree: 4,
            collapse_budget: 200_000,
        };
        match p {
            Profile::Default => default,
            Profile::Small => Caps {
                horn_dim: 2,
                soa_rounds: 2,
                ex_stages: 1,
                trunc_dim: 2,
                sd_iterations: 1,
                level_dim: 2,
                bidegree: 3,
                collapse_budget: 50_000,
                ..default
            },
            Profile::Large => Caps { horn_dim: 4, level_dim: 4, soa_rounds: 4, collapse_budget: 1_000_000, ..default },
        }
    }

    fn values(&self) -> [usize; 10] {
        [
            self.horn_dim,
            self.low_dim,
            self.soa_dim,
            self.soa_rounds,
            self.ex_stages,
            self.trunc_dim,
            self.sd_iterations,
            self.level_dim,
            self.bidegree,
            self.collapse_budget,
        ]
    }

    fn slot(&mut self, field: &str) -> Option<&mut usize> {
        Some(match field {
            "horn_dim" => &mut self.horn_dim,
            "low_dim" => &mut self.low_dim,
            "soa_dim" => &mut self.soa_dim,
            "soa_rounds" => &mut self.soa_rounds,
            "ex_stages" => &mut self.ex_stages,
            "trunc_dim" => &mut self.trunc_dim,
            "sd_iterations" => &mut self.sd_iterations,
            "level_dim" => &mut self.level_dim,
            "bidegree" => &mut self.bidegree,
            "collapse_budget" => &mut self.collapse_budget,
            _ => return None,
        })
    }

    /// Hard bounds: `(minimum, maximum)` per field.
    fn bounds(field: &str) -> (usize, usize) {
        match field {
            "horn_dim" => (1, 4),
            "low_dim" => (1, 3),
            "soa_dim" => (1, 3),
            "soa_rounds" => (0, 6),
            "ex_stages" => (0, 3),
            "trunc_dim" => (1, 4),
            "sd_iterations" => (0, 3),
            "level_dim" => (0, 4),
            "bidegree" => (0, 5),
            "collapse_budget" => (1, 50_000_000),
            _ => (0, usize::MAX),
        }
    }

    /// Fields raised above the validated default caps.
    pub fn beyond_validated(&self) -> Vec<String> {
        let base = Caps::for_profile(Profile::Default).values();
        CAP_FIELDS
            .iter()
            .zip(self.values().iter().zip(base))
            .filter(|(_, (v, b))| *v > b)
            .map(|(f, (v, b))| format!("{f} = {v} (validated up to {b})"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub profile: Profile,
    pub caps: Caps,
    pub scenarios: Vec<ScenarioId>,
}

impl Config {
    pub fn for_profile(profile: Profile) -> Config {
        Config { profile, caps: Caps::for_profile(profile), scenarios: ScenarioId::ALL.to_vec() }
    }

    /// The default configuration under the profile named by [`PROFILE_ENV`].
    pub fn from_env() -> Result<Config> {
        Ok(Config::for_profile(Profile::from_env()?))
    }

    /// Only the given scenarios, in the given profile.
    pub fn only(profile: Profile, ids: &[ScenarioId]) -> Config {
        Config { scenarios: ids.to_vec(), ..Config::for_profile(profile) }
    }

    /// Parses a TOML document on top of `base_profile`. A `profile` key in the
    /// document takes precedence.
    pub fn parse(text: &str, base_profile: Profile) -> Result<Config> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let span = e.span().unwrap_or(0..0);
            config_error(text, span.clone(), &field_at(text, span, e.message()), e.message().trim())
        })?;
        let profile = match &raw.profile {
            Some(p) => p.get_ref().parse().map_err(|m: String| config_error(text, p.span(), "profile", &m))?,
            None => base_profile,
        };
        let mut config = Config::for_profile(profile);
        for (field, value) in &raw.caps {
            let name = field.get_ref().as_str();
            let slot = config
                .caps
                .slot(name)
                .ok_or_else(|| config_error(text, field.span(), name, &format!("unknown cap; expected one of {CAP_FIELDS:?}")))?;
            let v = *value.get_ref();
            let (lo, hi) = Caps::bounds(name);
            if v < 0 || (v as u128) < lo as u128 || v as u128 > hi as u128 {
                return Err(config_error(
                    text,
                    value.span(),
                    &format!("caps.{name}"),
                    &format!("value {v} outside the allowed range {lo}..={hi}"),
                ));
            }
            *slot = v as usize;
        }
        if let Some(list) = &raw.scenarios {
            let mut ids = Vec::new();
            for s in list.get_ref() {
                let id: ScenarioId = s.get_ref().parse().map_err(|m: String| config_error(text, s.span(), "scenarios", &m))?;
                if ids.contains(&id) {
                    return Err(config_error(text, s.span(), "scenarios", &format!("{id} listed twice")));
                }
                ids.push(id);
            }
            config.scenarios = ids;
        }
        for (name, table) in &raw.scenario {
            let id: ScenarioId = name
                .get_ref()
                .parse()
                .map_err(|m: String| config_error(text, name.span(), &format!("scenario.{}", name.get_ref()), &m))?;
            if table.enabled == Some(false) {
                config.scenarios.retain(|s| *s != id);
            }
        }
        config.scenarios.sort();
        Ok(config)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    profile: Option<Spanned<String>>,
    scenarios: Option<Spanned<Vec<Spanned<String>>>>,
    #[serde(default)]
    caps: BTreeMap<Spanned<String>, Spanned<i64>>,
    #[serde(default)]
    scenario: BTreeMap<Spanned<String>, ScenarioTable>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioTable {
    enabled: Option<bool>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// The key named on the line of `span`, or the field quoted in `message`.
fn field_at(text: &str, span: Range<usize>, message: &str) -> String {
    if let Some(start) = message.find('`') {
        if let Some(len) = message[start + 1..].find('`') {
            return message[start + 1..start + 1 + len].to_string();
        }
    }
    let line = text.lines().nth(line_of(text, span.start) - 1).unwrap_or("");
    match line.split_once('=') {
        Some((key, _)) => key.trim().to_string(),
        None => line.trim().trim_matches(|c| c == '[' || c == ']').to_string(),
    }
}

fn config_error(text: &str, span: Range<usize>, field: &str, message: &str) -> Error {
    Error::Config { line: line_of(text, span.start), field: field.to_string(), message: message.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_caps_and_selection() {
        let c = Config::parse("scenarios = [\"S1\", \"s3\"]\n[caps]\nhorn_dim = 2\n", Profile::Default).unwrap();
        assert_eq!(c.scenarios, vec![ScenarioId::S1, ScenarioId::S3]);
        assert_eq!(c.caps.horn_dim, 2);
        let c = Config::parse("[scenario.S9]\nenabled = false\n", Profile::Default).unwrap();
        assert_eq!(c.scenarios.len(), 9);
        assert!(!c.scenarios.contains(&ScenarioId::S9));
        let c = Config::parse("profile = \"small\"\n", Profile::Default).unwrap();
        assert_eq!(c.caps, Caps::for_profile(Profile::Small));
        assert!(Config::parse("scenarios = []", Profile::Default).unwrap().scenarios.is_empty());
    }

    #[test]
    fn errors_carry_line_and_field() {
        let e = Config::parse("[caps]\nhorn_dim = 2\nlow_dim = 99\n", Profile::Default).unwrap_err();
        assert!(matches!(e, Error::Config { line: 3, ref field, .. } if field == "caps.low_dim"), "{e}");
        let e = Config::parse("\n\nscenarios = [\"S11\"]\n", Profile::Default).unwrap_err();
        assert!(matches!(e, Error::Config { line: 3, ref field, .. } if field == "scenarios"), "{e}");
        let e = Config::parse("[caps]\nbogus = 1\n", Profile::Default).unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, ref field, .. } if field == "bogus"), "{e}");
        let e = Config::parse("colour = 1\n", Profile::Default).unwrap_err();
        assert!(matches!(e, Error::Config { line: 1, ref field, .. } if field == "colour"), "{e}");
        let e = Config::parse("[caps\n", Profile::Default).unwrap_err();
        assert!(matches!(e, Error::Config { line: 1, .. }), "{e}");
    }

    #[test]
    fn large_profile_is_flagged() {
        assert!(Caps::for_profile(Profile::Default).beyond_validated().is_empty());
        assert!(!Caps::for_profile(Profile::Large).beyond_validated().is_empty());
    }
}
