//! Suite selection, configuration and the `nf` entry point.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::espace::{build_espace, verify_classical_limit, verify_espace_suite};
use crate::hspace::{build_hspace, verify_hspace_suite, HarmonicSpace};
use crate::ncalg::gen::Class;
use crate::ncalg::NCPoly;
use crate::parse::{parse_with, Index};
use crate::qgauge::{build_gauge_algebra, dump_components, instanton_curvature, verify_gauge_suite, verify_instanton_suite};
use crate::qscalar::{parse_rational, Rational};
use crate::qsphere::checks::verify_sphere_suite;
use crate::qsphere::{build_sphere, build_sphere_with, Sphere, SphereOptions};
use crate::qtensor::{verify_tensor_suite, TensorSet};
use crate::report::{Format, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Tensor,
    Sphere,
    Espace,
    Gauge,
    Instanton,
    Hspace,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Tensor, Suite::Sphere, Suite::Espace, Suite::Gauge, Suite::Instanton, Suite::Hspace];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tensor => "tensor",
            Suite::Sphere => "sphere",
            Suite::Espace => "espace",
            Suite::Gauge => "gauge",
            Suite::Instanton => "instanton",
            Suite::Hspace => "hspace",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub max_deg: usize,
    pub s0: Option<Rational>,
    pub seed: u64,
    pub format: Format,
    /// Print the instanton curvature components after the report.
    pub dump_f: bool,
    /// Negative control: build the sphere with its determinant term removed.
    pub corrupt: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { suite: Suite::All, max_deg: 3, s0: None, seed: 7, format: Format::Text, dump_f: false, corrupt: false }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_deg == 0 {
            return Err(Error::Config("--max-deg must be positive".into()));
        }
        if self.s0.as_ref().is_some_and(|s| *s == Rational::from_integer(0.into())) {
            return Err(Error::ZeroSpecialization);
        }
        Ok(())
    }

    pub fn q_label(&self) -> String {
        match &self.s0 {
            None => "generic".into(),
            Some(s) => format!("s={s}"),
        }
    }
}

pub fn parse_point(text: &str) -> Result<Rational> {
    let s = parse_rational(text).ok_or_else(|| Error::Config(format!("`{text}` is not a rational number")))?;
    if s == Rational::from_integer(0.into()) {
        return Err(Error::ZeroSpecialization);
    }
    Ok(s)
}

fn sphere_for(cfg: &SuiteConfig) -> Result<Sphere> {
    let sph = if cfg.corrupt {
        build_sphere_with(&SphereOptions { drop_determinant: true, ..Default::default() })?
    } else {
        build_sphere()?
    };
    match &cfg.s0 {
        Some(s) => sph.specialize(s),
        None => Ok(sph),
    }
}

/// One report per selected suite, in [`Suite::EACH`] order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    cfg.validate()?;
    let selected: Vec<Suite> = if cfg.suite == Suite::All { Suite::EACH.to_vec() } else { vec![cfg.suite] };
    let q = cfg.q_label();
    let classical = cfg.s0.as_ref().is_some_and(|s| *s == Rational::from_integer(1.into()));
    let mut out = Vec::new();
    for s in selected {
        let checks = match s {
            Suite::Tensor => {
                let t = TensorSet::generic();
                let t = match &cfg.s0 {
                    Some(s0) => t.specialize(s0)?,
                    None => t,
                };
                verify_tensor_suite(&t)
            }
            Suite::Sphere => verify_sphere_suite(&sphere_for(cfg)?, cfg.max_deg.max(2)),
            Suite::Espace => {
                let e = build_espace()?;
                let mut checks = match &cfg.s0 {
                    Some(s0) => verify_espace_suite(&e.specialize(s0)?, cfg.seed),
                    None => verify_espace_suite(&e, cfg.seed),
                };
                if classical {
                    checks.extend(verify_classical_limit(&e));
                }
                checks
            }
            Suite::Gauge | Suite::Instanton => {
                let ga = build_gauge_algebra()?;
                let ga = match &cfg.s0 {
                    Some(s0) => ga.specialize(s0)?,
                    None => ga,
                };
                if s == Suite::Gauge {
                    verify_gauge_suite(&ga)
                } else {
                    verify_instanton_suite(&ga)
                }
            }
            Suite::Hspace => {
                let hs = build_hspace()?;
                let hs = match &cfg.s0 {
                    Some(s0) => hs.specialize(s0)?,
                    None => hs,
                };
                verify_hspace_suite(&hs, cfg.max_deg)
            }
            Suite::All => unreachable!(),
        };
        out.push(Report::new(s.name(), q.clone(), checks));
    }
    Ok(out)
}

/// The instanton curvature as `(a,b) [i k al be] coefficient` lines.
pub fn dump_curvature(cfg: &SuiteConfig) -> Result<String> {
    let ga = build_gauge_algebra()?;
    let ga = match &cfg.s0 {
        Some(s0) => ga.specialize(s0)?,
        None => ga,
    };
    dump_components(&instanton_curvature(&ga)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algebra {
    Sphere,
    Espace,
    Gauge,
    Hspace,
}

impl FromStr for Algebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Algebra::Sphere),
            "espace" => Ok(Algebra::Espace),
            "gauge" => Ok(Algebra::Gauge),
            "hspace" => Ok(Algebra::Hspace),
            _ => Err(Error::Config(format!("unknown algebra `{s}` (sphere, espace, gauge, hspace)"))),
        }
    }
}

fn spinor(i: &Index) -> Option<u8> {
    match i {
        Index::Int(v @ 1..=2) => Some(*v as u8),
        _ => None,
    }
}

fn charge(i: &Index) -> Option<i8> {
    match i {
        Index::Plus | Index::Int(1) => Some(1),
        Index::Minus | Index::Int(-1) => Some(-1),
        _ => None,
    }
}

fn sphere_abbrev(sph: &Sphere, name: &str, idx: &[Index]) -> Result<Option<NCPoly>> {
    match (name, idx) {
        ("ub", [a, i]) => match (charge(a), spinor(i)) {
            (Some(a), Some(i)) => Ok(Some(sph.ubar(a, i))),
            _ => Err(Error::UnknownName(format!("ub({a:?},{i:?})"))),
        },
        _ => Ok(None),
    }
}

fn hspace_abbrev(hs: &HarmonicSpace, name: &str, idx: &[Index]) -> Result<Option<NCPoly>> {
    let bad = || Error::UnknownName(format!("{name}{idx:?}"));
    match (name, idx) {
        ("xp", [al, c]) => Ok(Some(hs.x_lower(spinor(al).ok_or_else(bad)?, charge(c).ok_or_else(bad)?)?)),
        ("k", [al, c]) => Ok(Some(hs.kappa_lower(spinor(al).ok_or_else(bad)?, charge(c).ok_or_else(bad)?)?)),
        _ => sphere_abbrev(&hs.sph, name, idx),
    }
}

/// Parses `text` in `algebra` and returns its normal form.
pub fn normal_form_of(algebra: Algebra, text: &str, s0: Option<&Rational>) -> Result<NCPoly> {
    let spec = |p: NCPoly| match s0 {
        Some(s) => p.specialize(s),
        None => Ok(p),
    };
    match algebra {
        Algebra::Sphere => {
            let sph = build_sphere()?;
            let p = spec(parse_with(text, &|n, i| sphere_abbrev(&sph, n, i))?)?;
            let sph = match s0 {
                Some(s) => sph.specialize(s)?,
                None => sph,
            };
            sph.sys.normal_form(&p)
        }
        Algebra::Espace => {
            let e = build_espace()?;
            let e = match s0 {
                Some(s) => e.specialize(s)?,
                None => e,
            };
            e.sys.normal_form(&spec(parse_with(text, &|_, _| Ok(None))?)?)
        }
        Algebra::Gauge => {
            let ga = build_gauge_algebra()?;
            let ga = match s0 {
                Some(s) => ga.specialize(s)?,
                None => ga,
            };
            ga.sys.normal_form(&spec(parse_with(text, &|_, _| Ok(None))?)?)
        }
        Algebra::Hspace => {
            let hs = build_hspace()?;
            let hs = match s0 {
                Some(s) => hs.specialize(s)?,
                None => hs,
            };
            let p = spec(parse_with(text, &|n, i| hspace_abbrev(&hs, n, i))?)?;
            let tower = p.generators().any(|g| matches!(g.class, Class::C | Class::G));
            if tower {
                hs.ext.sys.normal_form(&p)
            } else {
                hs.sys.normal_form(&p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in Suite::EACH {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn zero_point_rejected() {
        assert_eq!(parse_point("0"), Err(Error::ZeroSpecialization));
        assert!(parse_point("3/2").is_ok());
    }

    #[test]
    fn nf_determinant() {
        let p = normal_form_of(Algebra::Sphere, "u(1,+) * u(2,-) - q * u(2,+) * u(1,-)", None).unwrap();
        assert_eq!(p, NCPoly::one());
    }

    #[test]
    fn nf_unknown_generator() {
        assert!(matches!(normal_form_of(Algebra::Espace, "u(1,+)", None), Err(Error::UnknownGenerator(..))));
    }

    #[test]
    fn nf_abbreviations() {
        let a = normal_form_of(Algebra::Hspace, "k(1,+)", None).unwrap();
        let b = normal_form_of(Algebra::Hspace, "s * dx(2,1) * u(1,+) - s^-1 * dx(1,1) * u(2,+)", None).unwrap();
        assert_eq!(a, b);
    }
}
