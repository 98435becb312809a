//! JSON file formats. Scalars are strings such as `3/4-1/2*i`; polynomial
//! entries use the text grammar of `jetcalc_core::poly::text`.

use std::collections::BTreeMap;
use std::path::Path;

use jetcalc_core::approxalg::{ApproxAlgebra, ApproxModule};
use jetcalc_core::family::{Family, Letter, PWCandidate, RepFamily, Word};
use jetcalc_core::jetfun::{delorme_module, MatPolyFamily};
use jetcalc_core::localmod::{dual_number_module, FinMod};
use jetcalc_core::poly::text::{format_exppoly, parse_exppoly, parse_scalar_expr};
use jetcalc_core::scalar::{ExpScalar, Scalar};
use jetcalc_core::{Matrix, Vector};
use serde::{Deserialize, Serialize};

use crate::InputError;

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| InputError::Json(path.display().to_string(), e))
}

pub fn scalar(s: &str) -> Result<Scalar, InputError> {
    Ok(parse_scalar_expr(s)?)
}

pub fn scalars(v: &[String]) -> Result<Vec<Scalar>, InputError> {
    v.iter().map(|s| scalar(s)).collect()
}

pub fn show(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn show_matrix(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| show(r)).collect()
}

pub fn show_exp_matrix(m: &Matrix<ExpScalar>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

/// Comma-separated scalars, e.g. `1,-1/2`.
pub fn parse_point(s: &str) -> Result<Vec<Scalar>, InputError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| scalar(t.trim())).collect()
}

fn square_matrix(entries: &[String], dim: usize) -> Result<Matrix, InputError> {
    if entries.len() != dim * dim {
        return Err(InputError::Invalid(format!("expected {} entries, found {}", dim * dim, entries.len())));
    }
    Ok(Matrix::from_vec(dim, dim, scalars(entries)?)?)
}

fn nested_matrix(rows: &[Vec<String>]) -> Result<Matrix, InputError> {
    let rows = rows.iter().map(|r| scalars(r)).collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(rows)?)
}

/// `{nvars, k, dim, action}`, each action matrix row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub nvars: usize,
    pub k: u32,
    pub dim: usize,
    pub action: Vec<Vec<String>>,
}

impl ModuleFile {
    pub fn from_module(e: &FinMod) -> Self {
        ModuleFile { nvars: e.nvars(), k: e.k(), dim: e.dim(), action: e.action().iter().map(|m| show(m.data())).collect() }
    }

    pub fn to_module(&self) -> Result<FinMod, InputError> {
        let action = self.action.iter().map(|m| square_matrix(m, self.dim)).collect::<Result<Vec<_>, _>>()?;
        Ok(FinMod::with_dim(self.nvars, self.k, self.dim, action)?)
    }
}

/// A module given as a file path or as `trivial`, `dual:<v>`,
/// `delorme:<v>;<v>;...` with `<v>` a comma-separated vector.
pub fn module_spec(spec: &str, nvars: usize) -> Result<FinMod, InputError> {
    let vector = |t: &str| -> Result<Vector, InputError> {
        let v = parse_point(t)?;
        if v.len() != nvars {
            return Err(InputError::Invalid(format!("direction {t:?} needs {nvars} coordinates")));
        }
        Ok(Vector::new(v))
    };
    if spec == "trivial" {
        return Ok(FinMod::trivial(nvars));
    }
    if let Some(v) = spec.strip_prefix("dual:") {
        return Ok(dual_number_module(&vector(v)?)?);
    }
    if let Some(vs) = spec.strip_prefix("delorme:") {
        let etas = vs.split(';').map(vector).collect::<Result<Vec<_>, _>>()?;
        return Ok(delorme_module(&etas)?);
    }
    let file: ModuleFile = read_json(Path::new(spec))?;
    if file.nvars != nvars {
        return Err(InputError::Invalid(format!("module has {} variables, expected {nvars}", file.nvars)));
    }
    file.to_module()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepEntry {
    pub label: String,
    pub dim: usize,
    pub generators: Vec<Vec<String>>,
}

/// `{nvars, reps: [{label, dim, generators}]}`, generator entries row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub nvars: usize,
    pub reps: Vec<RepEntry>,
}

fn exp_family(nvars: usize, dim: usize, entries: &[String]) -> Result<MatPolyFamily, InputError> {
    if entries.len() != dim * dim {
        return Err(InputError::Invalid(format!("expected {} entries, found {}", dim * dim, entries.len())));
    }
    let parsed = entries.iter().map(|t| parse_exppoly(t, nvars)).collect::<Result<Vec<_>, _>>()?;
    Ok(MatPolyFamily::new(nvars, dim, dim, parsed)?)
}

fn show_family(f: &MatPolyFamily) -> Vec<String> {
    f.entries().iter().map(format_exppoly).collect()
}

impl FamilyFile {
    pub fn from_family(f: &Family) -> Self {
        FamilyFile {
            nvars: f.nvars(),
            reps: f
                .reps()
                .iter()
                .map(|r| RepEntry {
                    label: r.label().into(),
                    dim: r.dim(),
                    generators: r.generators().iter().map(show_family).collect(),
                })
                .collect(),
        }
    }

    pub fn to_family(&self) -> Result<Family, InputError> {
        let reps = self
            .reps
            .iter()
            .map(|r| {
                let gens = r.generators.iter().map(|g| exp_family(self.nvars, r.dim, g)).collect::<Result<Vec<_>, _>>()?;
                Ok(RepFamily::new(r.label.clone(), self.nvars, r.dim, gens)?)
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(Family::new(self.nvars, reps)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub label: String,
    pub dim: usize,
    pub entries: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTerm {
    pub coeff: String,
    pub word: String,
}

/// `{nvars, reps: [{label, dim, entries}], words?: [{coeff, word}]}`: the
/// explicit components plus `Σ coeff · π_ξ(word)` for every label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateFile {
    pub nvars: usize,
    #[serde(default)]
    pub reps: Vec<ComponentEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<WordTerm>,
}

impl CandidateFile {
    pub fn from_candidate(c: &PWCandidate) -> Self {
        CandidateFile {
            nvars: c.nvars(),
            reps: c
                .components()
                .iter()
                .map(|(label, f)| ComponentEntry { label: label.clone(), dim: f.rows(), entries: show_family(f) })
                .collect(),
            words: Vec::new(),
        }
    }

    pub fn to_candidate(&self, family: &Family) -> Result<PWCandidate, InputError> {
        if self.nvars != family.nvars() {
            return Err(InputError::Invalid(format!(
                "candidate has {} variables, family has {}",
                self.nvars,
                family.nvars()
            )));
        }
        let terms = self
            .words
            .iter()
            .map(|t| Ok((scalar(&t.coeff)?, parse_word(&t.word)?)))
            .collect::<Result<Vec<_>, InputError>>()?;
        let base = PWCandidate::from_words(family, &terms)?;
        let mut components: BTreeMap<String, MatPolyFamily> = if terms.is_empty() {
            BTreeMap::new()
        } else {
            base.components().clone()
        };
        for c in &self.reps {
            let rep = family.rep(&c.label)?;
            if c.dim != rep.dim() {
                return Err(InputError::Invalid(format!("component {:?} has dim {}, expected {}", c.label, c.dim, rep.dim())));
            }
            let f = exp_family(self.nvars, c.dim, &c.entries)?;
            let sum = match components.remove(&c.label) {
                Some(g) => g.add(&f)?,
                None => f,
            };
            components.insert(c.label.clone(), sum);
        }
        Ok(PWCandidate::new(self.nvars, components)?)
    }
}

/// `g1 g2^-1 g1`; the empty string is the identity.
pub fn parse_word(s: &str) -> Result<Word, InputError> {
    s.split_whitespace()
        .map(|tok| {
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let index: usize = name
                .strip_prefix('g')
                .and_then(|n| n.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| InputError::Invalid(format!("bad letter {tok:?}; expected g<n> or g<n>^-1")))?;
            Ok(Letter::new(index - 1, inverse))
        })
        .collect()
}

pub fn format_word(w: &[Letter]) -> String {
    w.iter()
        .map(|l| format!("g{}{}", l.generator + 1, if l.inverse { "^-1" } else { "" }))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `{basis, structure_constants, idempotent_chain, action}`; action matrices
/// are lists of rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub basis: Vec<String>,
    pub structure_constants: Vec<Vec<Vec<String>>>,
    pub idempotent_chain: Vec<Vec<String>>,
    pub action: Vec<Vec<Vec<String>>>,
}

impl AlgebraFile {
    pub fn from_module(m: &ApproxModule) -> Self {
        let alg = m.algebra();
        AlgebraFile {
            basis: (0..alg.dim()).map(|i| format!("e{}", i + 1)).collect(),
            structure_constants: alg.structure().iter().map(|row| row.iter().map(|c| show(c)).collect()).collect(),
            idempotent_chain: alg.chain().iter().map(|a| show(a)).collect(),
            action: m.action().iter().map(show_matrix).collect(),
        }
    }

    pub fn to_module(&self) -> Result<ApproxModule, InputError> {
        let structure = self
            .structure_constants
            .iter()
            .map(|row| row.iter().map(|c| scalars(c)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if structure.len() != self.basis.len() {
            return Err(InputError::Invalid(format!(
                "{} basis names but {} rows of structure constants",
                self.basis.len(),
                structure.len()
            )));
        }
        let chain = self.idempotent_chain.iter().map(|a| scalars(a)).collect::<Result<Vec<_>, _>>()?;
        let alg = ApproxAlgebra::new(structure, chain)?;
        let action = self.action.iter().map(|m| nested_matrix(m)).collect::<Result<Vec<_>, _>>()?;
        let dim = action.first().map_or(0, Matrix::rows);
        Ok(ApproxModule::new(alg, dim, action)?)
    }
}

/// `{module, family, evaluation_points, matrices}` for `jet`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JetResult {
    pub module: ModuleFile,
    pub family: Vec<Vec<String>>,
    pub evaluation_points: Vec<Vec<String>>,
    pub matrices: Vec<Vec<Vec<String>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_round_trip() {
        let w = parse_word("g1 g2^-1  g1").unwrap();
        assert_eq!(w, vec![Letter::new(0, false), Letter::new(1, true), Letter::new(0, false)]);
        assert_eq!(format_word(&w), "g1 g2^-1 g1");
        assert!(parse_word("g0").is_err());
        assert!(parse_word("h1").is_err());
        assert!(parse_word("").unwrap().is_empty());
    }

    #[test]
    fn module_specs() {
        assert_eq!(module_spec("trivial", 2).unwrap().dim(), 1);
        assert_eq!(module_spec("dual:1,0", 2).unwrap().dim(), 2);
        assert_eq!(module_spec("delorme:1;2", 1).unwrap().dim(), 4);
        assert!(module_spec("dual:1", 2).is_err());
    }

    #[test]
    fn module_file_round_trip() {
        let e = module_spec("delorme:1,1;0,1", 2).unwrap();
        let text = serde_json::to_string(&ModuleFile::from_module(&e)).unwrap();
        let back: ModuleFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_module().unwrap(), e);
    }
}
