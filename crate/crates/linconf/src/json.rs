//! Wire formats: everything the batch front end reads and writes. Big
//! integers travel as decimal strings so no consumer ever loses precision;
//! plain JSON numbers are accepted on input.

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::hypergraph::{ColoredHypergraph, Edge, RepresentationCertificate, SystemRef};
use crate::matrix::IntMatrix;
use crate::pipeline::{AffineMap, EquivalenceMap, MapKind, PipelineTrace};
use crate::system::{HomSystem, VarDomain};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::str::FromStr;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupWire {
    pub orders: Vec<u64>,
}

impl GroupWire {
    pub fn to_group(&self) -> Result<FiniteAbelianGroup> {
        FiniteAbelianGroup::normalize(&self.orders)
    }

    pub fn from_group(g: &FiniteAbelianGroup) -> Self {
        GroupWire {
            orders: g.orders().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixWire {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Value>>,
}

fn parse_entry(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else {
                Err(Error::InvalidInput(format!("non-integer entry {}", n)))
            }
        }
        Value::String(s) => {
            BigInt::from_str(s).map_err(|_| Error::InvalidInput(format!("bad integer {:?}", s)))
        }
        other => Err(Error::InvalidInput(format!("bad matrix entry {}", other))),
    }
}

impl MatrixWire {
    pub fn to_matrix(&self) -> Result<IntMatrix> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::DimensionMismatch("matrix entry grid".into()));
        }
        let mut rows = Vec::with_capacity(self.rows);
        for row in &self.entries {
            rows.push(row.iter().map(parse_entry).collect::<Result<Vec<_>>>()?);
        }
        IntMatrix::from_rows(rows)
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        MatrixWire {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|r| m.row(r).iter().map(|e| Value::String(e.to_string())).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemWire {
    pub matrix: MatrixWire,
    pub block: usize,
    pub group: GroupWire,
    pub rhs: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row_moduli: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col_orders: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_spans: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eq_spans: Option<Vec<(usize, usize)>>,
}

impl SystemWire {
    pub fn to_system(&self) -> Result<HomSystem> {
        let matrix = self.matrix.to_matrix()?;
        // Fully general encoding when the explicit fields are present.
        if let (Some(row_moduli), Some(col_orders), Some(var_spans), Some(eq_spans)) = (
            &self.row_moduli,
            &self.col_orders,
            &self.var_spans,
            &self.eq_spans,
        ) {
            let rhs = self.rhs.iter().flatten().copied().collect();
            return HomSystem::new(
                matrix,
                rhs,
                row_moduli.clone(),
                col_orders.clone(),
                var_spans.clone(),
                eq_spans.clone(),
            );
        }
        let orders = &self.group.orders;
        if self.block == 1 && matrix.cols() > 0 {
            // Scalar coefficients over the (possibly non-cyclic) group.
            let group = self.group.to_group()?;
            let rhs = self
                .rhs
                .iter()
                .map(|b| group.element(b))
                .collect::<Result<Vec<_>>>()?;
            return HomSystem::scalar(&matrix, &group, &rhs);
        }
        if orders.len() != self.block {
            return Err(Error::InvalidInput(
                "group orders must list one order per block slot".into(),
            ));
        }
        if matrix.rows() % self.block != 0 || matrix.cols() % self.block != 0 {
            return Err(Error::DimensionMismatch(
                "matrix dimensions must be multiples of the block size".into(),
            ));
        }
        let k = matrix.rows() / self.block;
        let m = matrix.cols() / self.block;
        let mut row_moduli = Vec::with_capacity(matrix.rows());
        for _ in 0..k {
            row_moduli.extend_from_slice(orders);
        }
        let mut col_orders = Vec::with_capacity(matrix.cols());
        for _ in 0..m {
            col_orders.extend_from_slice(orders);
        }
        let rhs = self.rhs.iter().flatten().copied().collect();
        let t = self.block;
        HomSystem::new(
            matrix,
            rhs,
            row_moduli,
            col_orders,
            (0..m).map(|i| (i * t, t)).collect(),
            (0..k).map(|j| (j * t, t)).collect(),
        )
    }

    pub fn from_system(sys: &HomSystem) -> Self {
        let block = sys.var_spans.first().map_or(1, |&(_, l)| l);
        let uniform = sys.var_spans.iter().all(|&(_, l)| l == block)
            && sys.eq_spans.iter().all(|&(_, l)| l == block);
        let group_orders = if uniform {
            sys.col_orders[..block].to_vec()
        } else {
            sys.col_orders.clone()
        };
        let rhs: Vec<Vec<u64>> = sys
            .eq_spans
            .iter()
            .map(|&(s, l)| sys.rhs[s..s + l].to_vec())
            .collect();
        SystemWire {
            matrix: MatrixWire::from_matrix(&sys.matrix),
            block,
            group: GroupWire {
                orders: group_orders,
            },
            rhs,
            row_moduli: Some(sys.row_moduli.clone()),
            col_orders: Some(sys.col_orders.clone()),
            var_spans: Some(sys.var_spans.clone()),
            eq_spans: Some(sys.eq_spans.clone()),
        }
    }
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_string(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from(
            BigInt::from_str(s).map_err(|_| Error::InvalidInput(format!("bad rational {:?}", s)))?,
        )),
        Some((num, den)) => {
            let n = BigInt::from_str(num)
                .map_err(|_| Error::InvalidInput(format!("bad rational {:?}", s)))?;
            let d = BigInt::from_str(den)
                .map_err(|_| Error::InvalidInput(format!("bad rational {:?}", s)))?;
            Ok(BigRational::new(n, d))
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineWire {
    pub matrix: MatrixWire,
    pub shift: Vec<u64>,
    pub target_orders: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapWire {
    pub sigma: Vec<usize>,
    pub affines: Vec<AffineWire>,
    pub mu: String,
    pub kind: String,
}

impl MapWire {
    pub fn from_map(map: &EquivalenceMap) -> Self {
        MapWire {
            sigma: map.sigma.clone(),
            affines: map
                .affines
                .iter()
                .map(|a| AffineWire {
                    matrix: MatrixWire::from_matrix(&a.matrix),
                    shift: a.shift.clone(),
                    target_orders: a.target_orders.clone(),
                })
                .collect(),
            mu: map.mu.to_string(),
            kind: map.kind.as_str().to_string(),
        }
    }

    pub fn to_map(&self) -> Result<EquivalenceMap> {
        let kind = match self.kind.as_str() {
            "1-auto" => MapKind::OneAuto,
            "mu-auto" => MapKind::MuAuto,
            "mu-equiv-1" => MapKind::MuEquiv1,
            "mu-equiv-2" => MapKind::MuEquiv2,
            "equivalent-rowreduce" => MapKind::EquivalentRowReduce,
            "split" => MapKind::Split,
            "join" => MapKind::Join,
            other => return Err(Error::InvalidInput(format!("unknown map kind {:?}", other))),
        };
        Ok(EquivalenceMap {
            sigma: self.sigma.clone(),
            affines: self
                .affines
                .iter()
                .map(|a| {
                    Ok(AffineMap {
                        matrix: a.matrix.to_matrix()?,
                        shift: a.shift.clone(),
                        target_orders: a.target_orders.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            mu: BigUint::from_str(&self.mu)
                .map_err(|_| Error::InvalidInput(format!("bad multiplicity {:?}", self.mu)))?,
            kind,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeWire {
    pub color: usize,
    pub verts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypergraphWire {
    pub vertices: usize,
    pub uniformity: usize,
    pub directed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<usize>>,
    pub edges: Vec<EdgeWire>,
}

impl HypergraphWire {
    pub fn from_graph(g: &ColoredHypergraph) -> Self {
        HypergraphWire {
            vertices: g.n_vertices,
            uniformity: g.uniformity,
            directed: g.directed,
            clusters: g.clusters.clone(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeWire {
                    color: e.color,
                    verts: e.verts.clone(),
                    label: e.label.clone(),
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<ColoredHypergraph> {
        let mut g = ColoredHypergraph::new(self.vertices, self.uniformity, self.directed);
        g.clusters = self.clusters.clone();
        for e in &self.edges {
            g.edges.push(Edge {
                color: e.color,
                verts: g.canonical_verts(&e.verts),
                label: e.label.clone(),
            });
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateWire {
    pub k: HypergraphWire,
    pub h: HypergraphWire,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemWire>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explicit_solutions: Option<(usize, usize, Vec<Vec<u64>>)>,
    pub label_domain_size: String,
    pub label_width: usize,
    pub gamma: Vec<String>,
    pub p: String,
    pub c: String,
    pub chi1: u64,
    pub chi2: String,
    pub q_values: Vec<Vec<u64>>,
    pub strong: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer: Option<Box<TransferWire>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransferWire {
    pub kind: String,
    pub map: MapWire,
    pub prev: CertificateWire,
}

impl CertificateWire {
    pub fn from_cert(cert: &RepresentationCertificate) -> Self {
        let (system, explicit) = match &cert.system {
            SystemRef::Hom(sys) => (Some(SystemWire::from_system(sys)), None),
            SystemRef::Explicit {
                width,
                num_vars,
                solutions,
            } => (None, Some((*width, *num_vars, solutions.clone()))),
        };
        CertificateWire {
            k: HypergraphWire::from_graph(&cert.k_graph),
            h: HypergraphWire::from_graph(&cert.h_graph),
            system,
            explicit_solutions: explicit,
            label_domain_size: cert.label_domain_size.to_string(),
            label_width: cert.label_width,
            gamma: cert.gamma.iter().map(rational_to_string).collect(),
            p: rational_to_string(&cert.p),
            c: rational_to_string(&cert.c),
            chi1: cert.chi1,
            chi2: rational_to_string(&cert.chi2),
            q_values: cert.q_values.clone(),
            strong: cert.strong,
            transfer: cert.transfer.as_ref().map(|t| {
                Box::new(TransferWire {
                    kind: t.kind.as_str().to_string(),
                    map: MapWire::from_map(&t.map),
                    prev: CertificateWire::from_cert(&t.prev),
                })
            }),
        }
    }

    pub fn to_cert(&self) -> Result<RepresentationCertificate> {
        let system = match (&self.system, &self.explicit_solutions) {
            (Some(wire), None) => SystemRef::Hom(wire.to_system()?),
            (None, Some((width, num_vars, solutions))) => SystemRef::Explicit {
                width: *width,
                num_vars: *num_vars,
                solutions: solutions.clone(),
            },
            _ => {
                return Err(Error::InvalidInput(
                    "certificate needs exactly one system description".into(),
                ))
            }
        };
        let transfer = match &self.transfer {
            None => None,
            Some(t) => {
                let map = t.map.to_map()?;
                Some(crate::hypergraph::TransferLayer {
                    kind: map.kind,
                    map,
                    prev: Box::new(t.prev.to_cert()?),
                })
            }
        };
        Ok(RepresentationCertificate {
            k_graph: self.k.to_graph()?,
            h_graph: self.h.to_graph()?,
            system,
            label_domain_size: BigUint::from_str(&self.label_domain_size)
                .map_err(|_| Error::InvalidInput("bad label domain size".into()))?,
            label_width: self.label_width,
            gamma: self
                .gamma
                .iter()
                .map(|s| rational_from_string(s))
                .collect::<Result<_>>()?,
            p: rational_from_string(&self.p)?,
            c: rational_from_string(&self.c)?,
            chi1: self.chi1,
            chi2: rational_from_string(&self.chi2)?,
            q_values: self.q_values.clone(),
            strong: self.strong,
            transfer,
        })
    }
}

pub fn domains_from_wire(wire: &[Vec<Vec<u64>>]) -> Vec<VarDomain> {
    wire.iter()
        .map(|d| d.iter().cloned().collect::<VarDomain>())
        .collect()
}

pub fn domains_to_wire(domains: &[VarDomain]) -> Vec<Vec<Vec<u64>>> {
    domains
        .iter()
        .map(|d| d.iter().cloned().collect())
        .collect()
}

/// Trace serialization: one object per stage plus the split family summary.
pub fn trace_to_value(trace: &PipelineTrace) -> Value {
    let stages: Vec<Value> = trace
        .stages
        .iter()
        .map(|s| {
            let certified = match &s.cert {
                None => "none",
                Some(c) => match c.mode {
                    crate::pipeline::CertMode::Exhaustive => "exhaustive",
                    crate::pipeline::CertMode::Sampled => "sampled",
                },
            };
            serde_json::json!({
                "label": s.label,
                "system": serde_json::to_value(SystemWire::from_system(&s.system)).unwrap(),
                "map": s.map_to_prev.as_ref().map(|m| serde_json::to_value(MapWire::from_map(m)).unwrap()),
                "mu": s.mu.to_string(),
                "certified": certified,
                "passed": s.cert.as_ref().map(|c| c.all_pass()),
                "notes": s.notes,
                "solution_count": s.solution_count.as_ref().map(|c| c.to_string()),
            })
        })
        .collect();
    let split = trace.split.as_ref().map(|family| {
        let entries: Vec<Value> = family
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "kappa": e.kappa.map(|(i, j)| vec![i + 1, j + 1]).unwrap_or(vec![1, 0]),
                    "divisor": e.divisor.as_ref().map(|d| d.to_string()),
                    "kernel_order": e.g,
                    "carrier_certified": e.f_report.as_ref().map(|r| r.all_pass()),
                    "circular": e.circular_ok,
                    "circular_map_certified": e.circ_report.as_ref().map(|r| r.all_pass()),
                })
            })
            .collect();
        serde_json::json!({
            "entries": entries,
            "block": family.t,
            "modulus": family.n,
        })
    });
    serde_json::json!({
        "stages": stages,
        "split": split,
        "final_is_circular": trace.final_is_circular,
        "no_solution": trace.no_solution,
        "total_mu": trace.total_mu.to_string(),
        "composite_certified": trace.composite_cert.as_ref().map(|c| c.all_pass()),
    })
}
