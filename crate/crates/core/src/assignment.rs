//! Search for noncontextual {0,1} assignments over families of orthonormal bases
//! that share rays.
//!
//! A family is colorable when each ray can be given one value, independent of the
//! basis it is read in, such that every declared basis contains exactly one ray
//! valued 1. The search is exhaustive, so a negative answer is a proof for the
//! finite family at hand.
//!
//! Families live in dimensions 3 through 8. In dimension 2 every basis is a
//! pair of rays and an assignment always exists, so such families are rejected.

use std::fmt::Write as _;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::MAX_DIM;
use crate::numeric::{format_complex, parse_complex};

/// Tolerance for unit norms and orthogonality inside a family.
pub const FAMILY_TOL: f64 = 1e-9;

/// The 18-ray, 9-basis family in dimension 4 that admits no assignment.
pub const KS18: &str = include_str!("../fixtures/ks18.rays");

#[derive(Debug, Clone, PartialEq)]
pub struct RayFamily {
    dim: usize,
    rays: Vec<DVector<Complex64>>,
    bases: Vec<Vec<usize>>,
}

/// Ids such that two vectors share an id iff `|<u|v>| ≥ 1 − tol`.
///
/// Ids are assigned in order of first appearance.
pub fn identify_rays(vectors: &[DVector<Complex64>], tol: f64) -> Result<Vec<usize>> {
    let mut representatives: Vec<&DVector<Complex64>> = Vec::new();
    let mut ids = Vec::with_capacity(vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        if (v.norm() - 1.0).abs() > FAMILY_TOL.max(tol) {
            return Err(Error::NotUnit(k));
        }
        if let Some(first) = representatives.first() {
            if first.len() != v.len() {
                return Err(Error::DimensionMismatch { expected: first.len(), found: v.len() });
            }
        }
        let id = representatives.iter().position(|r| r.dotc(v).norm() >= 1.0 - tol).unwrap_or_else(|| {
            representatives.push(v);
            representatives.len() - 1
        });
        ids.push(id);
    }
    Ok(ids)
}

impl RayFamily {
    pub fn new(dim: usize, rays: Vec<DVector<Complex64>>, bases: Vec<Vec<usize>>) -> Result<Self> {
        if !(3..=MAX_DIM).contains(&dim) {
            return Err(Error::MalformedFamily(format!("dimension {dim} is outside 3..={MAX_DIM}")));
        }
        for (k, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::MalformedFamily(format!("ray {k} has {} coordinates, expected {dim}", r.len())));
            }
            if (r.norm() - 1.0).abs() > FAMILY_TOL {
                return Err(Error::NotUnit(k));
            }
        }
        let ids = identify_rays(&rays, FAMILY_TOL)?;
        if let Some(k) = (0..ids.len()).find(|&k| ids[..k].contains(&ids[k])) {
            return Err(Error::MalformedFamily(format!("ray {k} repeats an earlier ray up to phase")));
        }
        for (b, basis) in bases.iter().enumerate() {
            if basis.len() != dim {
                return Err(Error::MalformedFamily(format!("basis {b} names {} rays, expected {dim}", basis.len())));
            }
            if let Some(&i) = basis.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::MalformedFamily(format!("basis {b} refers to missing ray {i}")));
            }
            for (p, &i) in basis.iter().enumerate() {
                for &j in &basis[p + 1..] {
                    if i == j || rays[i].dotc(&rays[j]).norm() > FAMILY_TOL {
                        return Err(Error::MalformedFamily(format!("rays {i} and {j} of basis {b} are not orthogonal")));
                    }
                }
            }
        }
        Ok(Self { dim, rays, bases })
    }

    /// Builds a family from bases given as explicit vectors, merging rays that
    /// coincide up to phase. Vectors are normalized first.
    pub fn from_bases(dim: usize, bases: &[Vec<Vec<Complex64>>], tol: f64) -> Result<Self> {
        let mut vectors = Vec::new();
        for basis in bases {
            for v in basis {
                let v = DVector::from_column_slice(v);
                let n = v.norm();
                if n <= f64::EPSILON {
                    return Err(Error::ZeroVector);
                }
                vectors.push(v.unscale(n));
            }
        }
        let ids = identify_rays(&vectors, tol)?;
        let mut rays: Vec<DVector<Complex64>> = Vec::new();
        for (v, &id) in vectors.iter().zip(&ids) {
            if id == rays.len() {
                rays.push(v.clone());
            }
        }
        let mut cursor = ids.into_iter();
        let index_bases = bases.iter().map(|b| cursor.by_ref().take(b.len()).collect()).collect();
        Self::new(dim, rays, index_bases)
    }

    /// Parses the line format
    ///
    /// ```text
    /// # comment
    /// dim 4
    /// ray 1 -1 0 0        (coordinates; complex as 1+2i; normalized on load)
    /// basis 0 1 2 3       (indices into the ray list)
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut rays = Vec::new();
        let mut bases = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut words = content.split_whitespace();
            let keyword = words.next().expect("non-empty line");
            let args: Vec<&str> = words.collect();
            let err = |message: String| Error::Parse { line, message };
            match keyword {
                "dim" => {
                    if dim.is_some() {
                        return Err(err("dimension declared twice".into()));
                    }
                    let [d] = args.as_slice() else {
                        return Err(err("`dim` takes one integer".into()));
                    };
                    dim = Some(d.parse::<usize>().map_err(|e| err(format!("bad dimension `{d}`: {e}")))?);
                }
                "ray" => {
                    let coords = args
                        .iter()
                        .map(|t| parse_complex(t).ok_or_else(|| err(format!("bad coordinate `{t}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    let v = DVector::from_vec(coords);
                    let norm = v.norm();
                    if norm <= f64::EPSILON {
                        return Err(err("zero ray".into()));
                    }
                    rays.push(v.unscale(norm));
                }
                "basis" => {
                    let idx = args
                        .iter()
                        .map(|t| t.parse::<usize>().map_err(|_| err(format!("bad ray index `{t}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    bases.push(idx);
                }
                other => return Err(err(format!("unknown keyword `{other}`"))),
            }
        }
        let dim = dim.ok_or(Error::Parse { line: 0, message: "missing `dim` line".into() })?;
        Self::new(dim, rays, bases)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\n", self.dim);
        for r in &self.rays {
            let coords: Vec<String> = r.iter().map(|&z| format_complex(z)).collect();
            let _ = writeln!(out, "ray {}", coords.join(" "));
        }
        for b in &self.bases {
            let idx: Vec<String> = b.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "basis {}", idx.join(" "));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[DVector<Complex64>] {
        &self.rays
    }

    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    /// Every basis has exactly one ray valued 1 under `assignment`.
    pub fn satisfies_sum_rule(&self, assignment: &[u8]) -> bool {
        assignment.len() == self.rays.len()
            && self.bases.iter().all(|b| b.iter().map(|&r| u32::from(assignment[r])).sum::<u32>() == 1)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Also forbid two orthogonal rays both valued 1 when they share no declared basis.
    pub forbid_orthogonal_pairs: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { assignment: Vec<u8>, nodes: u64 },
    ProvedNone { nodes: u64 },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. } | SearchOutcome::ProvedNone { nodes } => *nodes,
        }
    }

    pub fn found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

const UNSET: u8 = u8::MAX;

struct Search<'a> {
    family: &'a RayFamily,
    order: Vec<usize>,
    bases_of: Vec<Vec<usize>>,
    orthogonal: Vec<Vec<usize>>,
    values: Vec<u8>,
    nodes: u64,
}

impl Search<'_> {
    fn consistent(&self, ray: usize) -> bool {
        for &b in &self.bases_of[ray] {
            let (mut ones, mut unset) = (0, 0);
            for &r in &self.family.bases[b] {
                match self.values[r] {
                    1 => ones += 1,
                    UNSET => unset += 1,
                    _ => {}
                }
            }
            if ones > 1 || (ones == 0 && unset == 0) {
                return false;
            }
        }
        self.values[ray] != 1 || self.orthogonal[ray].iter().all(|&o| self.values[o] != 1)
    }

    fn descend(&mut self, depth: usize) -> bool {
        let Some(&ray) = self.order.get(depth) else {
            return true;
        };
        for value in [1, 0] {
            self.values[ray] = value;
            if self.consistent(ray) {
                self.nodes += 1;
                if self.descend(depth + 1) {
                    return true;
                }
            }
        }
        self.values[ray] = UNSET;
        false
    }
}

/// Exhaustive backtracking for an assignment with exactly one 1 per basis.
///
/// Rays are tried most-constrained first (most bases). Rays in no basis are left at 0.
pub fn search_bivalent_assignment(family: &RayFamily, options: SearchOptions) -> SearchOutcome {
    let n = family.rays.len();
    let mut bases_of = vec![Vec::new(); n];
    for (b, basis) in family.bases.iter().enumerate() {
        for &r in basis {
            bases_of[r].push(b);
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&r| !bases_of[r].is_empty()).collect();
    order.sort_by_key(|&r| std::cmp::Reverse(bases_of[r].len()));

    let orthogonal = if options.forbid_orthogonal_pairs {
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && family.rays[i].dotc(&family.rays[j]).norm() <= FAMILY_TOL)
                    .collect()
            })
            .collect()
    } else {
        vec![Vec::new(); n]
    };

    let mut values = vec![UNSET; n];
    for r in 0..n {
        if bases_of[r].is_empty() {
            values[r] = 0;
        }
    }
    let mut search = Search { family, order, bases_of, orthogonal, values, nodes: 0 };
    if search.descend(0) {
        SearchOutcome::Found { assignment: search.values, nodes: search.nodes }
    } else {
        SearchOutcome::ProvedNone { nodes: search.nodes }
    }
}
