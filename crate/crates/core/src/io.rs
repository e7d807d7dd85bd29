//! JSON file formats.
//!
//! Rationals are strings such as `"3"` or `"-1/2"`. Output is canonical:
//! object keys sorted, rationals in lowest terms, zero entries omitted from
//! product tables, so that `serialize(parse(x))` is stable.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cocycle::{Cocycle, ExtensionBundle};
use crate::error::{Error, Result};
use crate::forms::GramForm;
use crate::homlie::HomLieStructure;
use crate::lie::{default_names, StructureConstants};
use crate::linalg::{self, format_scalar, parse_scalar, Mat, Scalar, Vector};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductEntry {
    left: String,
    right: String,
    result: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    dim: usize,
    basis: Vec<String>,
    skew: bool,
    products: Vec<ProductEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormFile {
    dim: usize,
    symmetric: bool,
    gram: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleFile {
    dim_g0: usize,
    dim_v: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v_basis: Option<Vec<String>>,
    values: Vec<ProductEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomLieFile {
    dim: usize,
    mu: AlgebraFile,
    alpha: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleFile {
    g0: Value,
    #[serde(rename = "B0")]
    b0: Value,
    theta: Value,
    #[serde(rename = "B")]
    b: Value,
    #[serde(default)]
    g: Option<Value>,
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("valid JSON value");
    s.push('\n');
    s
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value, ctx: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::parse(ctx, e.to_string()))
}

fn from_str<T: for<'de> Deserialize<'de>>(text: &str, ctx: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(ctx, e.to_string()))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("reading {}", path.display()),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        context: format!("writing {}", path.display()),
        source,
    })
}

fn scalar(s: &str, ctx: impl FnOnce() -> String) -> Result<Scalar> {
    parse_scalar(s).map_err(|m| Error::parse(ctx(), m))
}

fn parse_grid(rows: &[Vec<String>], ctx: &str) -> Result<Mat> {
    let width = rows.first().map_or(0, Vec::len);
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::DimensionMismatch(format!("{ctx}: row {i} has length {}, expected {width}", row.len())));
        }
        let r = row
            .iter()
            .enumerate()
            .map(|(j, s)| scalar(s, || format!("{ctx}[{i}][{j}]")))
            .collect::<Result<Vector>>()?;
        parsed.push(r);
    }
    if parsed.is_empty() {
        return Ok(Mat::zeros(0, 0));
    }
    Mat::from_rows(parsed)
}

/// A matrix as a grid of rational strings.
pub fn matrix_to_value(m: &Mat) -> Value {
    serde_json::to_value(m).expect("serializable")
}

pub fn matrix_from_value(v: Value, ctx: &str) -> Result<Mat> {
    let rows: Vec<Vec<String>> = from_value(v, ctx)?;
    parse_grid(&rows, ctx)
}

fn label_index(names: &[String]) -> HashMap<&str, usize> {
    names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}

fn lookup(idx: &HashMap<&str, usize>, label: &str, ctx: impl FnOnce() -> String) -> Result<usize> {
    idx.get(label)
        .copied()
        .ok_or_else(|| Error::parse(ctx(), format!("unknown basis label {label:?}")))
}

fn result_map(v: &[Scalar], names: &[String]) -> BTreeMap<String, String> {
    v.iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| (n.clone(), format_scalar(c)))
        .collect()
}

fn parse_result(map: &BTreeMap<String, String>, idx: &HashMap<&str, usize>, dim: usize, ctx: &str) -> Result<Vector> {
    let mut v = linalg::zero_vec(dim);
    for (label, s) in map {
        let k = lookup(idx, label, || format!("{ctx}.result"))?;
        v[k] = scalar(s, || format!("{ctx}.result.{label}"))?;
    }
    Ok(v)
}

fn check_names(names: &[String], ctx: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::parse(ctx, format!("duplicate basis label {n:?}")));
        }
    }
    Ok(())
}

fn algebra_file(alg: &StructureConstants) -> AlgebraFile {
    let n = alg.dim();
    let mut products = Vec::new();
    for i in 0..n {
        let start = if alg.is_skew() { i + 1 } else { 0 };
        for j in start..n {
            let v = alg.basis_product(i, j);
            if !linalg::is_zero_vec(v) {
                products.push(ProductEntry {
                    left: alg.names()[i].clone(),
                    right: alg.names()[j].clone(),
                    result: result_map(v, alg.names()),
                });
            }
        }
    }
    AlgebraFile {
        dim: n,
        basis: alg.names().to_vec(),
        skew: alg.is_skew(),
        products,
    }
}

fn algebra_from_file(file: AlgebraFile, ctx: &str) -> Result<StructureConstants> {
    if file.basis.len() != file.dim {
        return Err(Error::DimensionMismatch(format!(
            "{ctx}: dim is {} but {} basis labels given",
            file.dim,
            file.basis.len()
        )));
    }
    check_names(&file.basis, ctx)?;
    let idx = label_index(&file.basis);
    let mut alg = StructureConstants::zero(file.basis.clone(), file.skew);
    let mut seen = std::collections::HashSet::new();
    for (p, entry) in file.products.iter().enumerate() {
        let here = format!("{ctx}: products[{p}]");
        let i = lookup(&idx, &entry.left, || here.clone())?;
        let j = lookup(&idx, &entry.right, || here.clone())?;
        let key = if file.skew { (i.min(j), i.max(j)) } else { (i, j) };
        if !seen.insert(key) {
            return Err(Error::parse(
                here,
                format!("pair ({}, {}) appears more than once", entry.left, entry.right),
            ));
        }
        let v = parse_result(&entry.result, &idx, file.dim, &here)?;
        if file.skew && i == j && !linalg::is_zero_vec(&v) {
            return Err(Error::parse(here, format!("skew product of {} with itself must vanish", entry.left)));
        }
        alg.set_basis_product(i, j, v);
    }
    Ok(alg)
}

/// The algebra file object, for embedding in larger documents.
pub fn algebra_to_value(alg: &StructureConstants) -> Value {
    serde_json::to_value(algebra_file(alg)).expect("serializable")
}

pub fn serialize_algebra(alg: &StructureConstants) -> String {
    to_canonical_string(&algebra_file(alg))
}

pub fn parse_algebra(text: &str, ctx: &str) -> Result<StructureConstants> {
    algebra_from_file(from_str(text, ctx)?, ctx)
}

pub fn serialize_form(form: &GramForm) -> String {
    to_canonical_string(form)
}

fn form_from_file(file: FormFile, ctx: &str) -> Result<GramForm> {
    let gram = parse_grid(&file.gram, &format!("{ctx}: gram"))?;
    if gram.rows() != file.dim || gram.cols() != file.dim {
        return Err(Error::DimensionMismatch(format!(
            "{ctx}: dim is {} but gram is {}x{}",
            file.dim,
            gram.rows(),
            gram.cols()
        )));
    }
    let form = GramForm::new(gram)?;
    if file.symmetric && !form.symmetric {
        return Err(Error::parse(ctx, "form is declared symmetric but its Gram matrix is not"));
    }
    Ok(form)
}

pub fn parse_form(text: &str, ctx: &str) -> Result<GramForm> {
    form_from_file(from_str(text, ctx)?, ctx)
}

fn cocycle_file(theta: &Cocycle, g0_names: &[String]) -> CocycleFile {
    let n = theta.dim_g0();
    let mut values = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = theta.basis_value(i, j);
            if !linalg::is_zero_vec(v) {
                values.push(ProductEntry {
                    left: g0_names[i].clone(),
                    right: g0_names[j].clone(),
                    result: result_map(v, theta.v_names()),
                });
            }
        }
    }
    CocycleFile {
        dim_g0: n,
        dim_v: theta.dim_v(),
        v_basis: Some(theta.v_names().to_vec()),
        values,
    }
}

/// Serializes `theta` with argument labels taken from `g0_names`.
pub fn serialize_cocycle(theta: &Cocycle, g0_names: &[String]) -> String {
    to_canonical_string(&cocycle_file(theta, g0_names))
}

fn cocycle_from_file(file: CocycleFile, g0_names: &[String], ctx: &str) -> Result<Cocycle> {
    if file.dim_g0 != g0_names.len() {
        return Err(Error::DimensionMismatch(format!(
            "{ctx}: dim_g0 is {} but g0 has dimension {}",
            file.dim_g0,
            g0_names.len()
        )));
    }
    let v_names = file.v_basis.unwrap_or_else(|| default_names("v", file.dim_v));
    if v_names.len() != file.dim_v {
        return Err(Error::DimensionMismatch(format!(
            "{ctx}: dim_v is {} but {} V labels given",
            file.dim_v,
            v_names.len()
        )));
    }
    check_names(&v_names, ctx)?;
    let idx0 = label_index(g0_names);
    let idx_v = label_index(&v_names);
    let mut theta = Cocycle::zero(file.dim_g0, file.dim_v).with_v_names(v_names.clone());
    let mut seen = std::collections::HashSet::new();
    for (p, entry) in file.values.iter().enumerate() {
        let here = format!("{ctx}: values[{p}]");
        let i = lookup(&idx0, &entry.left, || here.clone())?;
        let j = lookup(&idx0, &entry.right, || here.clone())?;
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::parse(
                here,
                format!("pair ({}, {}) appears more than once", entry.left, entry.right),
            ));
        }
        let v = parse_result(&entry.result, &idx_v, file.dim_v, &here)?;
        if i == j && !linalg::is_zero_vec(&v) {
            return Err(Error::parse(here, format!("θ({0},{0}) must vanish", entry.left)));
        }
        theta.set(i, j, v);
    }
    Ok(theta)
}

pub fn parse_cocycle(text: &str, g0_names: &[String], ctx: &str) -> Result<Cocycle> {
    cocycle_from_file(from_str(text, ctx)?, g0_names, ctx)
}

pub fn serialize_homlie(hl: &HomLieStructure) -> String {
    to_canonical_string(&HomLieFile {
        dim: hl.dim(),
        mu: algebra_file(&hl.mu),
        alpha: hl.alpha.to_strings(),
    })
}

/// Parses a Hom-Lie file as a candidate; twisted Jacobi is not enforced so
/// that failing structures can be inspected.
pub fn parse_homlie(text: &str, ctx: &str) -> Result<HomLieStructure> {
    let file: HomLieFile = from_str(text, ctx)?;
    if !file.mu.skew {
        return Err(Error::parse(ctx, "mu must be declared skew"));
    }
    let mu = algebra_from_file(file.mu, &format!("{ctx}: mu"))?;
    let alpha = parse_grid(&file.alpha, &format!("{ctx}: alpha"))?;
    if mu.dim() != file.dim {
        return Err(Error::DimensionMismatch(format!("{ctx}: dim is {} but mu has dimension {}", file.dim, mu.dim())));
    }
    HomLieStructure::candidate(mu, alpha)
}

pub fn read_algebra(path: &Path) -> Result<StructureConstants> {
    parse_algebra(&read_text(path)?, &path.display().to_string())
}

pub fn read_form(path: &Path) -> Result<GramForm> {
    parse_form(&read_text(path)?, &path.display().to_string())
}

pub fn read_cocycle(path: &Path, g0_names: &[String]) -> Result<Cocycle> {
    parse_cocycle(&read_text(path)?, g0_names, &path.display().to_string())
}

pub fn read_homlie(path: &Path) -> Result<HomLieStructure> {
    parse_homlie(&read_text(path)?, &path.display().to_string())
}

/// A list of matrices, e.g. a derivation basis.
pub fn serialize_matrices(ms: &[Mat]) -> String {
    to_canonical_string(&ms.iter().map(Mat::to_strings).collect::<Vec<_>>())
}

pub fn parse_matrices(text: &str, ctx: &str) -> Result<Vec<Mat>> {
    let grids: Vec<Vec<Vec<String>>> = from_str(text, ctx)?;
    grids
        .iter()
        .enumerate()
        .map(|(i, g)| parse_grid(g, &format!("{ctx}[{i}]")))
        .collect()
}

pub fn read_matrices(path: &Path) -> Result<Vec<Mat>> {
    parse_matrices(&read_text(path)?, &path.display().to_string())
}

/// Resolves a bundle component: a string is a path relative to `base`, an
/// object is the component inline.
fn component(v: Value, base: &Path, ctx: &str) -> Result<(String, String)> {
    match v {
        Value::String(p) => {
            let path: PathBuf = base.join(p);
            Ok((read_text(&path)?, path.display().to_string()))
        }
        Value::Object(_) => Ok((v.to_string(), ctx.to_string())),
        _ => Err(Error::parse(ctx, "expected a file path or an inline object")),
    }
}

/// Parses a bundle whose components are paths relative to `base` or inline
/// objects, and validates it.
pub fn parse_bundle(text: &str, base: &Path, ctx: &str) -> Result<ExtensionBundle> {
    let file: BundleFile = from_str(text, ctx)?;
    let (t, c) = component(file.g0, base, &format!("{ctx}: g0"))?;
    let g0 = parse_algebra(&t, &c)?;
    let (t, c) = component(file.b0, base, &format!("{ctx}: B0"))?;
    let b0 = parse_form(&t, &c)?;
    let (t, c) = component(file.theta, base, &format!("{ctx}: theta"))?;
    let theta = parse_cocycle(&t, g0.names(), &c)?;
    let (t, c) = component(file.b, base, &format!("{ctx}: B"))?;
    let b = parse_form(&t, &c)?;
    if theta.dim_g0() + theta.dim_v() != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "{ctx}: B has dimension {} but g0 ⊕ V has dimension {}",
            b.dim,
            theta.dim_g0() + theta.dim_v()
        )));
    }
    match file.g {
        Some(gv) => {
            let (t, c) = component(gv, base, &format!("{ctx}: g"))?;
            let g = parse_algebra(&t, &c)?;
            if g.dim() != b.dim {
                return Err(Error::DimensionMismatch(format!("{c}: g has dimension {}, B has {}", g.dim(), b.dim)));
            }
            ExtensionBundle::with_g(g0, b0, theta, g, b)
        }
        None => ExtensionBundle::new(g0, b0, theta, b),
    }
}

pub fn read_bundle(path: &Path) -> Result<ExtensionBundle> {
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_bundle(&read_text(path)?, base, &path.display().to_string())
}

/// Writes `g0.json`, `B0.json`, `theta.json`, `B.json`, `g.json` and a
/// `bundle.json` referencing them into `dir`. Returns the bundle path.
pub fn write_bundle(dir: &Path, bundle: &ExtensionBundle) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        context: format!("creating {}", dir.display()),
        source,
    })?;
    write_text(&dir.join("g0.json"), &serialize_algebra(&bundle.g0))?;
    write_text(&dir.join("B0.json"), &serialize_form(&bundle.b0))?;
    write_text(&dir.join("theta.json"), &serialize_cocycle(&bundle.theta, bundle.g0.names()))?;
    write_text(&dir.join("B.json"), &serialize_form(&bundle.b))?;
    write_text(&dir.join("g.json"), &serialize_algebra(&bundle.g))?;
    let manifest = serde_json::json!({
        "g0": "g0.json",
        "B0": "B0.json",
        "theta": "theta.json",
        "B": "B.json",
        "g": "g.json",
    });
    let path = dir.join("bundle.json");
    write_text(&path, &to_canonical_string(&manifest))?;
    Ok(path)
}
