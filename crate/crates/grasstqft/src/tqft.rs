//! The Frobenius algebra and functor of the Grassmann TQFT: matrix elements,
//! fusion structure constants with the twisted metric, closed invariants,
//! level-rank duality, and executable verification of the gluing and
//! degeneration rules.



use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_basis, Multipartition, Partition};
use crate::rational::to_bigint_exact;
use crate::vi::{vi_integral, Integrand, QuotIntegral, TheoryParams};

/// Gluing sums enumerate basis^t intermediate multipartitions; exponential in
/// t, so this is the supported envelope.
pub const MAX_INTERMEDIATE_CIRCLES: u32 = 3;

/// One matrix element F(g) with labeled input and output circles.
#[derive(Clone, Debug)]
pub struct MatrixElementQuery {
    pub genus: u32,
    pub inputs: Multipartition,
    pub outputs: Multipartition,
    pub theory: TheoryParams,
}

/// F(g)_λ^μ = ∫ a_λ · a_{μ*} · a_r^{r(g+u)+k} on the Quot scheme of the one
/// contributing degree d = (|λ|−|μ|)/(k+r) + r(g+u), where u is the number of
/// output components. Returns 0 when the degree is not an integer (the
/// divisibility obstruction) or is negative (no contributing Quot scheme).
pub fn matrix_element(q: &MatrixElementQuery) -> Result<BigInt> {
    let th = q.theory;
    let (r, k, n) = (th.r, th.k, th.n());
    q.inputs.ensure_fits(r, k)?;
    q.outputs.ensure_fits(r, k)?;
    let u = q.outputs.len() as i64;
    let g = q.genus as i64;
    let wl = q.inputs.weight() as i64;
    let wm = q.outputs.weight() as i64;
    if (wl - wm).rem_euclid(n as i64) != 0 {
        return Ok(BigInt::zero());
    }
    let d = (wl - wm) / n as i64 + r as i64 * (g + u);
    if d < 0 {
        return Ok(BigInt::zero());
    }
    let mut factors = q.inputs.parts().to_vec();
    for part in q.outputs.parts() {
        factors.push(part.star(r, k)?);
    }
    let top_power = r as i64 * (g + u) + k as i64;
    let integral = QuotIntegral {
        genus: q.genus,
        degree: d,
        r,
        n,
        integrand: Integrand::SchurProduct {
            factors,
            top_power: top_power as u32,
        },
    };
    // The integrand degree must equal the expected dimension identically; a
    // mismatch here is an implementation bug, never a user error.
    let value = vi_integral(&integral).map_err(|e| match e {
        Error::DimensionMismatch { expected, actual } => Error::internal(format!(
            "matrix element dimension assertion failed: expected {expected}, got {actual}"
        )),
        other => other,
    })?;
    to_bigint_exact(&value)
        .map_err(|_| Error::internal(format!("matrix element not an integer: {value}")))
}

/// Genus-0 three-point constant without the a_r^{k+r} factor: the quantum
/// cohomology form ∫ a_λ a_μ a_{ν*} at the bare contributing degree. Zero
/// when no nonnegative integer degree exists. Agreement with the fusion-table
/// route is the two-form consistency the degree-shift identity guarantees.
pub fn fusion_constant_direct(
    theory: TheoryParams,
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
) -> Result<BigInt> {
    let (r, k, n) = (theory.r, theory.k, theory.n());
    lambda.ensure_fits(r, k)?;
    mu.ensure_fits(r, k)?;
    nu.ensure_fits(r, k)?;
    let num = lambda.weight() as i64 + mu.weight() as i64 - nu.weight() as i64;
    if num.rem_euclid(n as i64) != 0 {
        return Ok(BigInt::zero());
    }
    let d = num / n as i64;
    if d < 0 {
        return Ok(BigInt::zero());
    }
    let integral = QuotIntegral {
        genus: 0,
        degree: d,
        r,
        n,
        integrand: Integrand::SchurProduct {
            factors: vec![lambda.clone(), mu.clone(), nu.star(r, k)?],
            top_power: 0,
        },
    };
    let value = vi_integral(&integral)?;
    to_bigint_exact(&value)
        .map_err(|_| Error::internal(format!("three-point constant not an integer: {value}")))
}

/// The Frobenius algebra of the theory: basis P_{r,k} in graded-lex order,
/// the twisted metric G_{λμ} = F(0)_{λ,μ}, and the structure constants
/// N_{λμ}^ν = F(0)_{λ,μ}^ν, with a content hash for persistence.
#[derive(Clone, Debug)]
pub struct FusionTable {
    pub theory: TheoryParams,
    pub basis: Vec<Partition>,
    metric: Vec<Vec<BigInt>>,
    constants: Vec<Vec<Vec<BigInt>>>,
    pub hash: String,
}

impl FusionTable {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn metric(&self, i: usize, j: usize) -> &BigInt {
        &self.metric[i][j]
    }

    pub fn constant(&self, i: usize, j: usize, l: usize) -> &BigInt {
        &self.constants[i][j][l]
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.basis.iter().position(|p| p == lambda)
    }

    fn canonical_json_without_hash(&self) -> Result<serde_json::Value> {
        let basis: Vec<Vec<u32>> = self.basis.iter().map(|p| p.rows().to_vec()).collect();
        let metric: Vec<Vec<i64>> = self
            .metric
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| i64::try_from(v).map_err(|_| Error::Overflow("metric entry")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut constants = serde_json::Map::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let mut inner = serde_json::Map::new();
                for l in 0..self.dim() {
                    let v = &self.constants[i][j][l];
                    if !v.is_zero() {
                        let as_i64 =
                            i64::try_from(v).map_err(|_| Error::Overflow("fusion constant"))?;
                        inner.insert(format!("ν{l}"), serde_json::json!(as_i64));
                    }
                }
                if !inner.is_empty() {
                    constants.insert(format!("λ{i},μ{j}"), serde_json::Value::Object(inner));
                }
            }
        }
        Ok(serde_json::json!({
            "r": self.theory.r,
            "k": self.theory.k,
            "basis": basis,
            "metric": metric,
            "constants": constants,
        }))
    }

    fn compute_hash(&self) -> Result<String> {
        let body = self.canonical_json_without_hash()?.to_string();
        let mut hasher = Sha256::new();
        hasher.update(body.as_bytes());
        Ok(hex_digest(&hasher.finalize()))
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut value = self.canonical_json_without_hash()?;
        value
            .as_object_mut()
            .unwrap()
            .insert("hash".to_string(), serde_json::json!(self.hash));
        Ok(value.to_string())
    }

    /// Parse and validate a persisted table: the basis must be the canonical
    /// graded-lex enumeration and the content hash must match.
    pub fn from_json_str(text: &str) -> Result<FusionTable> {
        let wire: FusionTableWire =
            serde_json::from_str(text).map_err(|e| Error::StaleCache(e.to_string()))?;
        let theory = TheoryParams::new(wire.r, wire.k)?;
        let basis: Vec<Partition> = wire
            .basis
            .into_iter()
            .map(Partition::new)
            .collect::<Result<Vec<_>>>()?;
        if basis != enumerate_basis(wire.r, wire.k) {
            return Err(Error::StaleCache("foreign basis order".to_string()));
        }
        let dim = basis.len();
        if wire.metric.len() != dim || wire.metric.iter().any(|row| row.len() != dim) {
            return Err(Error::StaleCache("metric shape mismatch".to_string()));
        }
        let metric: Vec<Vec<BigInt>> = wire
            .metric
            .iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let mut constants = vec![vec![vec![BigInt::zero(); dim]; dim]; dim];
        for (key, inner) in &wire.constants {
            let (i, j) = parse_pair_key(key, dim)?;
            for (nu_key, value) in inner {
                let l = parse_nu_key(nu_key, dim)?;
                constants[i][j][l] = BigInt::from(*value);
            }
        }
        let mut table = FusionTable {
            theory,
            basis,
            metric,
            constants,
            hash: String::new(),
        };
        table.hash = table.compute_hash()?;
        if table.hash != wire.hash {
            return Err(Error::StaleCache(format!(
                "hash mismatch: stored {}, recomputed {}",
                wire.hash, table.hash
            )));
        }
        Ok(table)
    }
}

#[derive(Serialize, Deserialize)]
struct FusionTableWire {
    r: u32,
    k: u32,
    basis: Vec<Vec<u32>>,
    metric: Vec<Vec<i64>>,
    constants: std::collections::BTreeMap<String, std::collections::BTreeMap<String, i64>>,
    hash: String,
}

fn parse_pair_key(key: &str, dim: usize) -> Result<(usize, usize)> {
    let bad = || Error::StaleCache(format!("bad constants key {key:?}"));
    let rest = key.strip_prefix('λ').ok_or_else(bad)?;
    let (i_str, j_part) = rest.split_once(',').ok_or_else(bad)?;
    let j_str = j_part.strip_prefix('μ').ok_or_else(bad)?;
    let i: usize = i_str.parse().map_err(|_| bad())?;
    let j: usize = j_str.parse().map_err(|_| bad())?;
    if i >= dim || j >= dim {
        return Err(bad());
    }
    Ok((i, j))
}

fn parse_nu_key(key: &str, dim: usize) -> Result<usize> {
    let bad = || Error::StaleCache(format!("bad constants key {key:?}"));
    let l: usize = key.strip_prefix('ν').ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if l >= dim {
        return Err(bad());
    }
    Ok(l)
}

fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Compute the full table: C(r+k,r)^2 metric entries and C(r+k,r)^3 structure
/// constants through genus-0 matrix elements, in parallel.
pub fn fusion_table(theory: TheoryParams) -> Result<FusionTable> {
    let basis = enumerate_basis(theory.r, theory.k);
    let dim = basis.len();
    let metric: Vec<Vec<BigInt>> = basis
        .par_iter()
        .map(|lam| {
            basis
                .iter()
                .map(|mu| {
                    matrix_element(&MatrixElementQuery {
                        genus: 0,
                        inputs: Multipartition::new(vec![lam.clone(), mu.clone()]),
                        outputs: Multipartition::empty(),
                        theory,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| (i, j)))
        .collect();
    let flat: Vec<Vec<BigInt>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            basis
                .iter()
                .map(|nu| {
                    matrix_element(&MatrixElementQuery {
                        genus: 0,
                        inputs: Multipartition::new(vec![basis[i].clone(), basis[j].clone()]),
                        outputs: Multipartition::new(vec![nu.clone()]),
                        theory,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut constants = vec![vec![Vec::new(); dim]; dim];
    for ((i, j), row) in pairs.into_iter().zip(flat) {
        constants[i][j] = row;
    }
    let mut table = FusionTable {
        theory,
        basis,
        metric,
        constants,
        hash: String::new(),
    };
    table.hash = table.compute_hash()?;
    Ok(table)
}

/// One verification outcome; failures carry both sides exactly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportEntry {
    pub check: String,
    pub instance: String,
    pub status: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn record(
        &mut self,
        check: &str,
        instance: String,
        lhs: impl ToString,
        rhs: impl ToString,
        equal: bool,
    ) {
        self.entries.push(ReportEntry {
            check: check.to_string(),
            instance,
            status: if equal { "pass" } else { "fail" }.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == "pass")
    }

    pub fn merge(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.status != "pass")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.entries).unwrap()
    }
}

/// Check the Frobenius-algebra axioms of a table exactly: commutativity,
/// associativity, the empty partition as unit, the compatibility
/// (a·b, c) = (a, b·c), and nondegeneracy of the metric.
pub fn verify_frobenius(table: &FusionTable) -> Report {
    let mut report = Report::default();
    let dim = table.dim();

    let mut commutative = true;
    let mut witness = String::new();
    'comm: for i in 0..dim {
        for j in 0..dim {
            for l in 0..dim {
                if table.constant(i, j, l) != table.constant(j, i, l) {
                    commutative = false;
                    witness = format!(
                        "N_{{{},{}}}^{{{}}}",
                        table.basis[i], table.basis[j], table.basis[l]
                    );
                    break 'comm;
                }
            }
        }
    }
    report.record(
        "commutativity",
        if commutative {
            "all pairs".to_string()
        } else {
            witness
        },
        "N_{λμ}", "N_{μλ}",
        commutative,
    );

    // The empty partition is the first basis element in graded-lex order.
    let unit = 0usize;
    let mut unit_ok = table.basis[unit].is_empty();
    let mut unit_witness = "unit basis vector".to_string();
    if unit_ok {
        'unit: for j in 0..dim {
            for l in 0..dim {
                let expected = if j == l { BigInt::one() } else { BigInt::zero() };
                if *table.constant(unit, j, l) != expected {
                    unit_ok = false;
                    unit_witness = format!(
                        "N_{{∅,{}}}^{{{}}} = {}",
                        table.basis[j],
                        table.basis[l],
                        table.constant(unit, j, l)
                    );
                    break 'unit;
                }
            }
        }
    }
    report.record(
        "unit",
        if unit_ok { "σ_∅ acts as identity".to_string() } else { unit_witness },
        "σ_∅ · σ_μ",
        "σ_μ",
        unit_ok,
    );

    let assoc_failure: Option<String> = (0..dim * dim)
        .into_par_iter()
        .find_map_any(|ij| {
            let (i, j) = (ij / dim, ij % dim);
            for l in 0..dim {
                for m in 0..dim {
                    let lhs: BigInt = (0..dim)
                        .map(|p| table.constant(i, j, p) * table.constant(p, l, m))
                        .sum();
                    let rhs: BigInt = (0..dim)
                        .map(|p| table.constant(j, l, p) * table.constant(i, p, m))
                        .sum();
                    if lhs != rhs {
                        return Some(format!(
                            "(σ_{}·σ_{})·σ_{} vs σ_{}·(σ_{}·σ_{}) at σ_{}: {} vs {}",
                            table.basis[i],
                            table.basis[j],
                            table.basis[l],
                            table.basis[i],
                            table.basis[j],
                            table.basis[l],
                            table.basis[m],
                            lhs,
                            rhs
                        ));
                    }
                }
            }
            None
        });
    report.record(
        "associativity",
        assoc_failure.clone().unwrap_or_else(|| "all triples".to_string()),
        "Σ_ρ N_{λμ}^ρ N_{ρν}^τ",
        "Σ_ρ N_{μν}^ρ N_{λρ}^τ",
        assoc_failure.is_none(),
    );

    let frob_failure: Option<String> = (0..dim * dim)
        .into_par_iter()
        .find_map_any(|ij| {
            let (i, j) = (ij / dim, ij % dim);
            for l in 0..dim {
                let lhs: BigInt = (0..dim)
                    .map(|p| table.constant(i, j, p) * table.metric(p, l))
                    .sum();
                let rhs: BigInt = (0..dim)
                    .map(|p| table.constant(j, l, p) * table.metric(i, p))
                    .sum();
                if lhs != rhs {
                    return Some(format!(
                        "(σ_{}·σ_{}, σ_{}) = {} vs (σ_{}, σ_{}·σ_{}) = {}",
                        table.basis[i], table.basis[j], table.basis[l], lhs,
                        table.basis[i], table.basis[j], table.basis[l], rhs
                    ));
                }
            }
            None
        });
    report.record(
        "frobenius-compatibility",
        frob_failure.clone().unwrap_or_else(|| "all triples".to_string()),
        "(a·b, c)",
        "(a, b·c)",
        frob_failure.is_none(),
    );

    let det = integer_matrix_determinant(&table.metric);
    report.record(
        "metric-nondegeneracy",
        format!("det G = {det}"),
        det.to_string(),
        "nonzero",
        !det.is_zero(),
    );

    let metric_symmetric = (0..dim).all(|i| (0..dim).all(|j| table.metric(i, j) == table.metric(j, i)));
    report.record(
        "metric-symmetry",
        "all pairs".to_string(),
        "G_{λμ}",
        "G_{μλ}",
        metric_symmetric,
    );

    report
}

/// Fraction-free Bareiss determinant over the integers.
fn integer_matrix_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// All t-fold multi-indices over a basis of size `dim`, leftmost component
/// most significant; the shared index order for gluing sums and matrices.
pub(crate) fn multi_indices(dim: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(dim.pow(t as u32));
    let mut cur = vec![0usize; t];
    loop {
        out.push(cur.clone());
        let mut pos = t;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < dim {
                break;
            }
            cur[pos] = 0;
        }
    }
}

/// The gluing rule across t intermediate circles:
/// Σ_μ F(g1)_λ^μ F(g2)_μ^ν = F(g1+g2+t−1)_λ^ν, both sides exact.
pub fn verify_gluing(
    g1: u32,
    g2: u32,
    lambda: &Multipartition,
    nu: &Multipartition,
    t: u32,
    theory: TheoryParams,
) -> Result<Report> {
    if t < 1 {
        return Err(Error::EnvelopeExceeded("gluing needs t >= 1".to_string()));
    }
    if t > MAX_INTERMEDIATE_CIRCLES {
        return Err(Error::EnvelopeExceeded(format!(
            "t = {t} exceeds the supported {MAX_INTERMEDIATE_CIRCLES} intermediate circles"
        )));
    }
    let basis = enumerate_basis(theory.r, theory.k);
    let indices = multi_indices(basis.len(), t as usize);
    let lhs: BigInt = indices
        .par_iter()
        .map(|idx| -> Result<BigInt> {
            let mid = Multipartition::new(idx.iter().map(|&i| basis[i].clone()).collect());
            let a = matrix_element(&MatrixElementQuery {
                genus: g1,
                inputs: lambda.clone(),
                outputs: mid.clone(),
                theory,
            })?;
            let b = matrix_element(&MatrixElementQuery {
                genus: g2,
                inputs: mid,
                outputs: nu.clone(),
                theory,
            })?;
            Ok(a * b)
        })
        .try_reduce(BigInt::zero, |a, b| Ok(a + b))?;
    let rhs = matrix_element(&MatrixElementQuery {
        genus: g1 + g2 + t - 1,
        inputs: lambda.clone(),
        outputs: nu.clone(),
        theory,
    })?;
    let mut report = Report::default();
    report.record(
        "gluing",
        format!(
            "r={} k={} g1={g1} g2={g2} t={t} λ={lambda} ν={nu}",
            theory.r, theory.k
        ),
        &lhs,
        &rhs,
        lhs == rhs,
    );
    Ok(report)
}

/// The genus-reduction rule F(g)_λ^μ = Σ_ρ F(g−1)_{λ,ρ}^{μ,ρ}.
pub fn verify_genus_reduction(
    g: u32,
    lambda: &Multipartition,
    mu: &Multipartition,
    theory: TheoryParams,
) -> Result<Report> {
    if g < 1 {
        return Err(Error::EnvelopeExceeded(
            "genus reduction needs g >= 1".to_string(),
        ));
    }
    let basis = enumerate_basis(theory.r, theory.k);
    let lhs = matrix_element(&MatrixElementQuery {
        genus: g,
        inputs: lambda.clone(),
        outputs: mu.clone(),
        theory,
    })?;
    let rhs: BigInt = basis
        .par_iter()
        .map(|rho| {
            matrix_element(&MatrixElementQuery {
                genus: g - 1,
                inputs: lambda.with_part(rho),
                outputs: mu.with_part(rho),
                theory,
            })
        })
        .try_reduce(BigInt::zero, |a, b| Ok(a + b))?;
    let mut report = Report::default();
    report.record(
        "genus-reduction",
        format!("r={} k={} g={g} λ={lambda} μ={mu}", theory.r, theory.k),
        &lhs,
        &rhs,
        lhs == rhs,
    );
    Ok(report)
}

/// The node-splitting rule
/// F(g1+g2)_{λ1⊎λ2}^{μ1⊎μ2} = Σ_ρ F(g1)_{λ1,ρ}^{μ1} · F(g2)_{λ2}^{μ2,ρ}.
#[allow(clippy::too_many_arguments)]
pub fn verify_degeneration_split(
    g1: u32,
    g2: u32,
    lambda1: &Multipartition,
    lambda2: &Multipartition,
    mu1: &Multipartition,
    mu2: &Multipartition,
    theory: TheoryParams,
) -> Result<Report> {
    let basis = enumerate_basis(theory.r, theory.k);
    let lhs = matrix_element(&MatrixElementQuery {
        genus: g1 + g2,
        inputs: lambda1.concat(lambda2),
        outputs: mu1.concat(mu2),
        theory,
    })?;
    let rhs: BigInt = basis
        .par_iter()
        .map(|rho| -> Result<BigInt> {
            let a = matrix_element(&MatrixElementQuery {
                genus: g1,
                inputs: lambda1.with_part(rho),
                outputs: mu1.clone(),
                theory,
            })?;
            let b = matrix_element(&MatrixElementQuery {
                genus: g2,
                inputs: lambda2.clone(),
                outputs: mu2.with_part(rho),
                theory,
            })?;
            Ok(a * b)
        })
        .try_reduce(BigInt::zero, |a, b| Ok(a + b))?;
    let mut report = Report::default();
    report.record(
        "degeneration-split",
        format!(
            "r={} k={} g=({g1},{g2}) λ=({lambda1},{lambda2}) μ=({mu1},{mu2})",
            theory.r, theory.k
        ),
        &lhs,
        &rhs,
        lhs == rhs,
    );
    Ok(report)
}

/// Level-rank duality: the same query evaluated in theory (r,k) and, with all
/// partitions transposed, in theory (k,r) must agree exactly.
pub fn level_rank_check(q: &MatrixElementQuery) -> Result<Report> {
    let dual = q.theory.dual()?;
    let lhs = matrix_element(q)?;
    let rhs = matrix_element(&MatrixElementQuery {
        genus: q.genus,
        inputs: q.inputs.transpose(),
        outputs: q.outputs.transpose(),
        theory: dual,
    })?;
    let mut report = Report::default();
    report.record(
        "level-rank",
        format!(
            "r={} k={} g={} λ={} μ={}",
            q.theory.r, q.theory.k, q.genus, q.inputs, q.outputs
        ),
        &lhs,
        &rhs,
        lhs == rhs,
    );
    Ok(report)
}
