//! JSON data-transfer shapes for every object the CLI reads or writes.
//! All numbers that could exceed 53 bits travel as strings; field
//! elements use the coefficient string format of the field module.

use serde::{Deserialize, Serialize};

use crate::carnot::{CarnotCase, CarnotInstance};
use crate::construct::{ConstructionCertificate, ConstructionRequest, GammaPair};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldKind};
use crate::forms::TernaryForm;
use crate::geometry::{
    DivisorEntry, DivisorOnCurve, DivisorOnLine, Line, ProjPoint,
};
use crate::linsys::{LinearSystemReport, Triviality};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum FieldDto {
    Q,
    Fp { p: u64 },
    Fpk { p: u64, k: usize, modulus: Vec<u64> },
}

impl FieldDto {
    pub fn from_field(f: &Field) -> FieldDto {
        match f.kind() {
            FieldKind::Rationals => FieldDto::Q,
            FieldKind::Prime { p } => FieldDto::Fp { p: *p },
            FieldKind::Extension { p, k, modulus } => {
                FieldDto::Fpk { p: *p, k: *k, modulus: modulus.clone() }
            }
        }
    }

    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldDto::Q => Ok(Field::rationals()),
            FieldDto::Fp { p } => Field::prime(*p),
            FieldDto::Fpk { p, k, modulus } => {
                let f = Field::extension(*p, modulus.clone())?;
                if f.extension_degree() != *k {
                    return Err(Error::InvalidInput("modulus degree disagrees with k".into()));
                }
                Ok(f)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermDto {
    pub e: [u16; 3],
    pub c: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TernaryFormDto {
    pub degree: usize,
    pub terms: Vec<TermDto>,
}

impl TernaryFormDto {
    pub fn from_form(f: &TernaryForm) -> TernaryFormDto {
        TernaryFormDto {
            degree: f.degree(),
            terms: f
                .terms()
                .map(|(e, c)| TermDto { e: [e.0, e.1, e.2], c: c.to_coeff_string() })
                .collect(),
        }
    }

    pub fn to_form(&self, field: &Field) -> Result<TernaryForm> {
        TernaryForm::from_terms(
            field,
            self.degree,
            self.terms
                .iter()
                .map(|t| Ok(((t.e[0], t.e[1], t.e[2]), field.parse_element(&t.c)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointDto {
    pub field: FieldDto,
    pub xyz: [String; 3],
}

impl PointDto {
    pub fn from_point(p: &ProjPoint) -> PointDto {
        let c = p.coords();
        PointDto {
            field: FieldDto::from_field(p.field()),
            xyz: [
                c[0].to_coeff_string(),
                c[1].to_coeff_string(),
                c[2].to_coeff_string(),
            ],
        }
    }

    pub fn to_point(&self) -> Result<ProjPoint> {
        let f = self.field.to_field()?;
        ProjPoint::new([
            f.parse_element(&self.xyz[0])?,
            f.parse_element(&self.xyz[1])?,
            f.parse_element(&self.xyz[2])?,
        ])
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineDto {
    pub dual: [String; 3],
}

impl LineDto {
    pub fn from_line(l: &Line) -> LineDto {
        let d = l.dual();
        LineDto {
            dual: [d[0].to_coeff_string(), d[1].to_coeff_string(), d[2].to_coeff_string()],
        }
    }

    pub fn to_line(&self, field: &Field) -> Result<Line> {
        Line::from_dual([
            field.parse_element(&self.dual[0])?,
            field.parse_element(&self.dual[1])?,
            field.parse_element(&self.dual[2])?,
        ])
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorEntryDto {
    pub point: PointDto,
    pub mult: usize,
    pub resdeg: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveDivisorDto {
    pub entries: Vec<DivisorEntryDto>,
}

impl CurveDivisorDto {
    pub fn from_divisor(d: &DivisorOnCurve) -> CurveDivisorDto {
        CurveDivisorDto {
            entries: d
                .entries()
                .iter()
                .map(|e| DivisorEntryDto {
                    point: PointDto::from_point(&e.point),
                    mult: e.mult,
                    resdeg: e.resdeg,
                })
                .collect(),
        }
    }

    pub fn to_divisor(&self, curve: &TernaryForm) -> Result<DivisorOnCurve> {
        Ok(DivisorOnCurve::new(
            curve.clone(),
            self.entries
                .iter()
                .map(|e| {
                    Ok(DivisorEntry {
                        point: e.point.to_point()?,
                        mult: e.mult,
                        resdeg: e.resdeg,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinePointDto {
    pub point: PointDto,
    pub mult: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "case")]
pub enum CarnotCaseDto {
    Triangle,
    TangentCorner { alpha: String },
    Concurrent,
}

/// Three lines, three point lists, and the case selector.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CarnotInstanceDto {
    pub field: FieldDto,
    pub lines: [LineDto; 3],
    pub divisors: [Vec<LinePointDto>; 3],
    #[serde(flatten)]
    pub case: CarnotCaseDto,
}

impl CarnotInstanceDto {
    pub fn from_instance(inst: &CarnotInstance) -> CarnotInstanceDto {
        let field = FieldDto::from_field(inst.lines()[0].field());
        let lines = [
            LineDto::from_line(&inst.lines()[0]),
            LineDto::from_line(&inst.lines()[1]),
            LineDto::from_line(&inst.lines()[2]),
        ];
        let div = |d: &DivisorOnLine| {
            d.entries()
                .iter()
                .map(|(p, m)| LinePointDto { point: PointDto::from_point(p), mult: *m })
                .collect()
        };
        let divisors = [
            div(&inst.divisors()[0]),
            div(&inst.divisors()[1]),
            div(&inst.divisors()[2]),
        ];
        let case = match inst.case() {
            CarnotCase::Triangle => CarnotCaseDto::Triangle,
            CarnotCase::TangentCorner { alpha } => {
                CarnotCaseDto::TangentCorner { alpha: alpha.to_coeff_string() }
            }
            CarnotCase::Concurrent => CarnotCaseDto::Concurrent,
        };
        CarnotInstanceDto { field, lines, divisors, case }
    }

    pub fn to_instance(&self) -> Result<CarnotInstance> {
        let field = self.field.to_field()?;
        let lines = [
            self.lines[0].to_line(&field)?,
            self.lines[1].to_line(&field)?,
            self.lines[2].to_line(&field)?,
        ];
        let mut divisors = vec![];
        for (l, pts) in lines.iter().zip(&self.divisors) {
            divisors.push(DivisorOnLine::new(
                l.clone(),
                pts.iter()
                    .map(|e| Ok((e.point.to_point()?, e.mult)))
                    .collect::<Result<Vec<_>>>()?,
            )?);
        }
        let [d1, d2, d3] = <[DivisorOnLine; 3]>::try_from(divisors)
            .map_err(|_| Error::InvalidInput("expected three divisors".into()))?;
        let case = match &self.case {
            CarnotCaseDto::Triangle => CarnotCase::Triangle,
            CarnotCaseDto::TangentCorner { alpha } => {
                CarnotCase::TangentCorner { alpha: field.parse_element(alpha)? }
            }
            CarnotCaseDto::Concurrent => CarnotCase::Concurrent,
        };
        CarnotInstance::new(lines, [d1, d2, d3], case)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum TrivialityDto {
    Trivial { m_prime: usize, e: CurveDivisorDto },
    NonTrivial { certificate: String },
    Undetermined,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDto {
    pub n: String,
    pub r: String,
    pub base_locus: CurveDivisorDto,
    pub very_special: bool,
    pub residual_dim: String,
    pub triviality: TrivialityDto,
    pub bound_check: bool,
    pub hartshorne_check: bool,
}

impl ReportDto {
    pub fn from_report(r: &LinearSystemReport) -> ReportDto {
        ReportDto {
            n: r.n.to_string(),
            r: r.r.to_string(),
            base_locus: CurveDivisorDto::from_divisor(&r.base_locus),
            very_special: r.very_special,
            residual_dim: r.residual_dim.to_string(),
            triviality: match &r.triviality {
                Triviality::Trivial { m_prime, e } => TrivialityDto::Trivial {
                    m_prime: *m_prime,
                    e: CurveDivisorDto::from_divisor(e),
                },
                Triviality::NonTrivial { certificate } => {
                    TrivialityDto::NonTrivial { certificate: certificate.clone() }
                }
                Triviality::Undetermined => TrivialityDto::Undetermined,
            },
            bound_check: r.bound_check,
            hartshorne_check: r.hartshorne_check,
        }
    }
}

/// Replayable record of one successful construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateDto {
    pub d: String,
    pub x: String,
    pub beta: String,
    pub seed: String,
    pub field: FieldDto,
    pub curve: TernaryFormDto,
    pub gamma: TernaryFormDto,
    pub lines: [LineDto; 3],
    pub e_points: Vec<PointDto>,
    pub z: CurveDivisorDto,
    pub report: ReportDto,
    pub expected_r: String,
    pub expected_n: String,
}

impl CertificateDto {
    pub fn from_certificate(c: &ConstructionCertificate) -> CertificateDto {
        CertificateDto {
            d: c.d.to_string(),
            x: c.x.to_string(),
            beta: c.beta.to_string(),
            seed: c.seed.to_string(),
            field: FieldDto::from_field(c.curve.field()),
            curve: TernaryFormDto::from_form(&c.curve),
            gamma: TernaryFormDto::from_form(&c.gamma),
            lines: [
                LineDto::from_line(&c.lines[0]),
                LineDto::from_line(&c.lines[1]),
                LineDto::from_line(&c.lines[2]),
            ],
            e_points: c.e_points.iter().map(PointDto::from_point).collect(),
            z: CurveDivisorDto::from_divisor(&c.z),
            report: ReportDto::from_report(&c.report),
            expected_r: c.expected_r.to_string(),
            expected_n: c.expected_n.to_string(),
        }
    }

    fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
        s.parse::<T>()
            .map_err(|_| Error::InvalidInput(format!("cannot parse {what} from {s:?}")))
    }

    /// Rebuild the raw inputs needed to re-run certification: the request,
    /// the triangle-and-curve pair, the curve C, and the extra points.
    pub fn to_inputs(
        &self,
    ) -> Result<(ConstructionRequest, GammaPair, TernaryForm, Vec<ProjPoint>)> {
        let field = self.field.to_field()?;
        let d: usize = Self::parse_num(&self.d, "d")?;
        let x: usize = Self::parse_num(&self.x, "x")?;
        let beta: usize = Self::parse_num(&self.beta, "beta")?;
        let seed: u64 = Self::parse_num(&self.seed, "seed")?;
        let req = ConstructionRequest::new(d, x, beta, field.clone(), seed)?;
        let curve = self.curve.to_form(&field)?;
        let gamma = self.gamma.to_form(&field)?;
        let lines = [
            self.lines[0].to_line(&field)?,
            self.lines[1].to_line(&field)?,
            self.lines[2].to_line(&field)?,
        ];
        let e_points = self
            .e_points
            .iter()
            .map(|p| p.to_point())
            .collect::<Result<Vec<_>>>()?;
        // the triangle points are the entries of Z that are not extra points
        let z = self.z.to_divisor(&curve)?;
        let mut z0: Vec<ProjPoint> = vec![];
        for e in z.entries() {
            if !e_points.contains(&e.point) {
                z0.push(e.point.clone());
            }
        }
        let mut divisors = vec![];
        for l in &lines {
            let pts: Vec<_> = z0.iter().filter(|p| l.contains(p)).cloned().collect();
            divisors.push(DivisorOnLine::new(l.clone(), pts.into_iter().map(|p| (p, 1)).collect())?);
        }
        let [d1, d2, d3] = <[DivisorOnLine; 3]>::try_from(divisors)
            .map_err(|_| Error::InvalidInput("expected three divisors".into()))?;
        let pair = GammaPair { lines, divisors: [d1, d2, d3], gamma, z0 };
        Ok((req, pair, curve, e_points))
    }
}

/// Element strings for CLI output.
pub fn element_string(e: &FieldElement) -> String {
    e.to_coeff_string()
}
