//! The on-disk JSON format shared by the command line, the certificate
//! machinery, and the C interface: one document per structure, tagged by
//! kind, with a carrier label list and a kind-specific payload.
//!
//! Payload literals: subsets are label lists, relations are label-pair
//! lists, pseudometrics are matrices of exact rationals written "p/q",
//! nearness structures are lists of near pairs of label sets (closed
//! upward and symmetrized on load, with a warning when closure adds
//! pairs), groups are Cayley tables of label rows. Serialization is
//! canonical: fixed field order, sorted members, pretty-printed with a
//! trailing newline, so equal structures produce identical bytes.

use num::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{GroupTable, GroupsError};
use crate::metrics::{EntourageChain, MetricsError, Pseudometric};
use crate::preprox::{PreProximity, PreproxError};
use crate::pretop::{PreTopology, PretopError};
use crate::preunif::{EntourageBasis, PreunifError};
use crate::relcore::{Relation, Subset, MAX_POINTS};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("carrier has {0} labels; at most {1} are supported")]
    CarrierTooLarge(usize, usize),
    #[error("duplicate carrier label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("row {row} has {got} entries, expected {want}")]
    RaggedRow { row: usize, got: usize, want: usize },
    #[error("matrix has {got} rows, expected {want}")]
    RowCountMismatch { got: usize, want: usize },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: &'static str, found: String },
    #[error("unsupported format version {0}")]
    BadVersion(u32),
    #[error(transparent)]
    Pretop(#[from] PretopError),
    #[error(transparent)]
    Preunif(#[from] PreunifError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Preprox(#[from] PreproxError),
    #[error(transparent)]
    Groups(#[from] GroupsError),
}

impl InterchangeError {
    /// File-format problems, as opposed to failures of the axioms that a
    /// structure's own constructor enforces. The command line maps format
    /// problems to exit 1 and axiom failures to exit 2.
    pub fn is_format(&self) -> bool {
        !matches!(
            self,
            InterchangeError::Pretop(_)
                | InterchangeError::Preunif(_)
                | InterchangeError::Metrics(_)
                | InterchangeError::Preprox(_)
                | InterchangeError::Groups(_)
        )
    }
}

/// A whole interchange file: version header plus the tagged body.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Envelope {
    pub format_version: u32,
    #[serde(flatten)]
    pub body: Body,
}

/// One trace line of a certificate: a named checker and its verdict.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceEntry {
    pub atom: String,
    pub value: bool,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Pretopology {
        carrier: Vec<String>,
        opens: Vec<Vec<String>>,
    },
    PreuniformityBasis {
        carrier: Vec<String>,
        basis: Vec<Vec<(String, String)>>,
    },
    Pseudometric {
        carrier: Vec<String>,
        entries: Vec<Vec<String>>,
    },
    EntourageChain {
        carrier: Vec<String>,
        links: Vec<Vec<(String, String)>>,
    },
    Preproximity {
        carrier: Vec<String>,
        near: Vec<(Vec<String>, Vec<String>)>,
    },
    Pretopgroup {
        carrier: Vec<String>,
        table: Vec<Vec<String>>,
        opens: Vec<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        prebase: Option<Vec<Vec<String>>>,
    },
    Certificate {
        target: String,
        canonical_id: String,
        structure: Box<Envelope>,
        trace: Vec<TraceEntry>,
    },
    Exhaustion {
        target: String,
        structure_kind: String,
        carrier_bound: usize,
        size_bound: usize,
        examined: usize,
    },
}

impl Body {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Body::Pretopology { .. } => "pretopology",
            Body::PreuniformityBasis { .. } => "preuniformity-basis",
            Body::Pseudometric { .. } => "pseudometric",
            Body::EntourageChain { .. } => "entourage-chain",
            Body::Preproximity { .. } => "preproximity",
            Body::Pretopgroup { .. } => "pretopgroup",
            Body::Certificate { .. } => "certificate",
            Body::Exhaustion { .. } => "exhaustion",
        }
    }
}

impl Envelope {
    pub fn new(body: Body) -> Self {
        Envelope { format_version: FORMAT_VERSION, body }
    }
}

/// Default display names: letters for small carriers, numbered points
/// beyond.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if n <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

fn check_labels(carrier: &[String]) -> Result<(), InterchangeError> {
    if carrier.is_empty() {
        return Err(InterchangeError::EmptyCarrier);
    }
    if carrier.len() > MAX_POINTS {
        return Err(InterchangeError::CarrierTooLarge(carrier.len(), MAX_POINTS));
    }
    for (i, l) in carrier.iter().enumerate() {
        if carrier[..i].contains(l) {
            return Err(InterchangeError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn index_of(carrier: &[String], label: &str) -> Result<usize, InterchangeError> {
    carrier
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| InterchangeError::UnknownLabel(label.to_string()))
}

fn subset_from_labels(carrier: &[String], labels: &[String]) -> Result<Subset, InterchangeError> {
    let mut s = Subset::empty(carrier.len());
    for l in labels {
        s = s.with(index_of(carrier, l)?);
    }
    Ok(s)
}

fn subset_to_labels(carrier: &[String], s: &Subset) -> Vec<String> {
    s.points().map(|x| carrier[x].clone()).collect()
}

fn relation_from_pairs(
    carrier: &[String],
    pairs: &[(String, String)],
) -> Result<Relation, InterchangeError> {
    let mut r = Relation::empty(carrier.len());
    for (a, b) in pairs {
        r = r.with_pair(index_of(carrier, a)?, index_of(carrier, b)?);
    }
    Ok(r)
}

fn relation_to_pairs(carrier: &[String], r: &Relation) -> Vec<(String, String)> {
    r.pairs().map(|(x, y)| (carrier[x].clone(), carrier[y].clone())).collect()
}

fn rational_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn rational_from_string(text: &str) -> Result<BigRational, InterchangeError> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|_| InterchangeError::BadRational(text.to_string()))
}

/// A structure decoded from a document, still paired with its labels.
#[derive(Clone, Debug)]
pub enum Structure {
    Pretopology(PreTopology),
    /// The raw minimal antichain; axiom verdicts are a separate step.
    PreuniformityBasis(EntourageBasis),
    Pseudometric(Pseudometric),
    EntourageChain(EntourageChain),
    Preproximity(PreProximity),
    Pretopgroup {
        group: GroupTable,
        tau: PreTopology,
        prebase: Option<Vec<Subset>>,
    },
}

impl Structure {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Structure::Pretopology(_) => "pretopology",
            Structure::PreuniformityBasis(_) => "preuniformity-basis",
            Structure::Pseudometric(_) => "pseudometric",
            Structure::EntourageChain(_) => "entourage-chain",
            Structure::Preproximity(_) => "preproximity",
            Structure::Pretopgroup { .. } => "pretopgroup",
        }
    }
}

/// A decoded document: the structure, its display labels, and any
/// normalization warnings raised while loading.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub structure: Structure,
    pub labels: Vec<String>,
    pub warnings: Vec<String>,
}

/// Decodes a structure document. Labels are resolved strictly; nearness
/// lists are symmetrized and closed upward with warnings; each structure
/// is built through its own constructor, so constructor-level axioms
/// (union closure, metric axioms, chain nesting, group axioms) are
/// enforced here and reported as non-format errors.
pub fn load(env: &Envelope) -> Result<Loaded, InterchangeError> {
    if env.format_version != FORMAT_VERSION {
        return Err(InterchangeError::BadVersion(env.format_version));
    }
    match &env.body {
        Body::Pretopology { carrier, opens } => {
            check_labels(carrier)?;
            let masks = opens
                .iter()
                .map(|o| subset_from_labels(carrier, o).map(|s| s.bits()))
                .collect::<Result<Vec<_>, _>>()?;
            let tau = PreTopology::from_masks(carrier.len(), masks)?;
            Ok(Loaded {
                structure: Structure::Pretopology(tau),
                labels: carrier.clone(),
                warnings: Vec::new(),
            })
        }
        Body::PreuniformityBasis { carrier, basis } => {
            check_labels(carrier)?;
            let members = basis
                .iter()
                .map(|pairs| relation_from_pairs(carrier, pairs))
                .collect::<Result<Vec<_>, _>>()?;
            let basis = EntourageBasis::new(carrier.len(), &members)?;
            Ok(Loaded {
                structure: Structure::PreuniformityBasis(basis),
                labels: carrier.clone(),
                warnings: Vec::new(),
            })
        }
        Body::Pseudometric { carrier, entries } => {
            check_labels(carrier)?;
            let n = carrier.len();
            if entries.len() != n {
                return Err(InterchangeError::RowCountMismatch { got: entries.len(), want: n });
            }
            let mut values = Vec::with_capacity(n * n);
            for (i, row) in entries.iter().enumerate() {
                if row.len() != n {
                    return Err(InterchangeError::RaggedRow { row: i, got: row.len(), want: n });
                }
                for cell in row {
                    values.push(rational_from_string(cell)?);
                }
            }
            let rho = Pseudometric::new(n, values)?;
            Ok(Loaded {
                structure: Structure::Pseudometric(rho),
                labels: carrier.clone(),
                warnings: Vec::new(),
            })
        }
        Body::EntourageChain { carrier, links } => {
            check_labels(carrier)?;
            let rels = links
                .iter()
                .map(|pairs| relation_from_pairs(carrier, pairs))
                .collect::<Result<Vec<_>, _>>()?;
            let chain = EntourageChain::new(carrier.len(), rels)?;
            Ok(Loaded {
                structure: Structure::EntourageChain(chain),
                labels: carrier.clone(),
                warnings: Vec::new(),
            })
        }
        Body::Preproximity { carrier, near } => {
            check_labels(carrier)?;
            let n = carrier.len();
            let mut listed: Vec<(u128, u128)> = Vec::new();
            for (a, b) in near {
                let sa = subset_from_labels(carrier, a)?;
                let sb = subset_from_labels(carrier, b)?;
                listed.push((sa.bits(), sb.bits()));
            }
            let mut warnings = Vec::new();
            let closed = |a: u128, b: u128| {
                listed.iter().any(|&(x, y)| {
                    (x & !a == 0 && y & !b == 0) || (y & !a == 0 && x & !b == 0)
                })
            };
            let full = (1u128 << n) - 1;
            let mut added = 0usize;
            for a in 0..=full {
                for b in 0..=full {
                    if closed(a, b) && !listed.contains(&(a, b)) {
                        added += 1;
                    }
                }
            }
            if added > 0 {
                warnings.push(format!(
                    "nearness list closed under symmetry and enlargement: {added} pairs added"
                ));
            }
            let delta = PreProximity::from_fn(n, |a: &Subset, b: &Subset| {
                closed(a.bits(), b.bits())
            })?;
            Ok(Loaded {
                structure: Structure::Preproximity(delta),
                labels: carrier.clone(),
                warnings,
            })
        }
        Body::Pretopgroup { carrier, table, opens, prebase } => {
            check_labels(carrier)?;
            let n = carrier.len();
            let mut rows = Vec::with_capacity(n);
            if table.len() != n {
                return Err(InterchangeError::RowCountMismatch { got: table.len(), want: n });
            }
            for (i, row) in table.iter().enumerate() {
                if row.len() != n {
                    return Err(InterchangeError::RaggedRow { row: i, got: row.len(), want: n });
                }
                rows.push(
                    row.iter()
                        .map(|l| index_of(carrier, l))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            let group = GroupTable::new(rows)?;
            let masks = opens
                .iter()
                .map(|o| subset_from_labels(carrier, o).map(|s| s.bits()))
                .collect::<Result<Vec<_>, _>>()?;
            let tau = PreTopology::from_masks(n, masks)?;
            let prebase = match prebase {
                None => None,
                Some(sets) => Some(
                    sets.iter()
                        .map(|s| subset_from_labels(carrier, s))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
            };
            Ok(Loaded {
                structure: Structure::Pretopgroup { group, tau, prebase },
                labels: carrier.clone(),
                warnings: Vec::new(),
            })
        }
        other => Err(InterchangeError::WrongKind {
            expected: "structure",
            found: other.kind_name().to_string(),
        }),
    }
}

/// Parses and decodes in one step.
pub fn loads(text: &str) -> Result<Loaded, InterchangeError> {
    let env: Envelope = serde_json::from_str(text)?;
    load(&env)
}

pub fn pretopology_doc(tau: &PreTopology, labels: &[String]) -> Envelope {
    Envelope::new(Body::Pretopology {
        carrier: labels.to_vec(),
        opens: tau.opens().map(|s| subset_to_labels(labels, &s)).collect(),
    })
}

pub fn basis_doc(basis: &EntourageBasis, labels: &[String]) -> Envelope {
    Envelope::new(Body::PreuniformityBasis {
        carrier: labels.to_vec(),
        basis: basis.members().iter().map(|r| relation_to_pairs(labels, r)).collect(),
    })
}

pub fn pseudometric_doc(rho: &Pseudometric, labels: &[String]) -> Envelope {
    let n = rho.n();
    Envelope::new(Body::Pseudometric {
        carrier: labels.to_vec(),
        entries: (0..n)
            .map(|x| (0..n).map(|y| rational_to_string(rho.dist(x, y))).collect())
            .collect(),
    })
}

pub fn chain_doc(chain: &EntourageChain, labels: &[String]) -> Envelope {
    Envelope::new(Body::EntourageChain {
        carrier: labels.to_vec(),
        links: chain.links().iter().map(|r| relation_to_pairs(labels, r)).collect(),
    })
}

/// Emits every near pair in ascending mask order; reloading is then
/// warning-free and exact.
pub fn preproximity_doc(delta: &PreProximity, labels: &[String]) -> Envelope {
    let n = delta.n();
    let full = (1u128 << n) - 1;
    let mut near = Vec::new();
    for a in 0..=full {
        for b in 0..=full {
            if delta.near_masks(a, b) {
                near.push((
                    subset_to_labels(labels, &Subset::from_bits(n, a)),
                    subset_to_labels(labels, &Subset::from_bits(n, b)),
                ));
            }
        }
    }
    Envelope::new(Body::Preproximity { carrier: labels.to_vec(), near })
}

pub fn group_doc(
    group: &GroupTable,
    tau: &PreTopology,
    prebase: Option<&[Subset]>,
    labels: &[String],
) -> Envelope {
    let n = group.n();
    Envelope::new(Body::Pretopgroup {
        carrier: labels.to_vec(),
        table: (0..n)
            .map(|x| (0..n).map(|y| labels[group.op(x, y)].clone()).collect())
            .collect(),
        opens: tau.opens().map(|s| subset_to_labels(labels, &s)).collect(),
        prebase: prebase.map(|sets| sets.iter().map(|s| subset_to_labels(labels, s)).collect()),
    })
}

/// Re-encodes a decoded structure with its labels.
pub fn structure_doc(structure: &Structure, labels: &[String]) -> Envelope {
    match structure {
        Structure::Pretopology(tau) => pretopology_doc(tau, labels),
        Structure::PreuniformityBasis(b) => basis_doc(b, labels),
        Structure::Pseudometric(rho) => pseudometric_doc(rho, labels),
        Structure::EntourageChain(c) => chain_doc(c, labels),
        Structure::Preproximity(d) => preproximity_doc(d, labels),
        Structure::Pretopgroup { group, tau, prebase } => {
            group_doc(group, tau, prebase.as_deref(), labels)
        }
    }
}

/// Canonical bytes: pretty JSON with fixed field order and a trailing
/// newline.
pub fn save(env: &Envelope) -> String {
    let mut text = serde_json::to_string_pretty(env).expect("documents always serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preunif::PreUniformity;

    fn labels(n: usize) -> Vec<String> {
        default_labels(n)
    }

    #[test]
    fn pretopology_documents_round_trip() {
        let tau = PreTopology::from_masks(3, vec![0b000, 0b011, 0b101, 0b110, 0b111]).unwrap();
        let doc = pretopology_doc(&tau, &labels(3));
        let text = save(&doc);
        let back = loads(&text).unwrap();
        assert!(back.warnings.is_empty());
        match back.structure {
            Structure::Pretopology(t) => assert_eq!(t, tau),
            other => panic!("wrong kind {}", other.kind_name()),
        }
        assert_eq!(save(&serde_json::from_str::<Envelope>(&text).unwrap()), text);
    }

    #[test]
    fn basis_documents_round_trip() {
        let mu = PreUniformity::from_members(
            2,
            &[
                Relation::diagonal(2).with_pair(0, 1),
                Relation::diagonal(2).with_pair(1, 0),
            ],
        )
        .unwrap();
        let doc = basis_doc(mu.basis(), &labels(2));
        let back = loads(&save(&doc)).unwrap();
        match back.structure {
            Structure::PreuniformityBasis(b) => assert_eq!(&b, mu.basis()),
            other => panic!("wrong kind {}", other.kind_name()),
        }
    }

    #[test]
    fn label_resolution_is_strict() {
        let text = r#"{
            "format_version": 1,
            "kind": "pretopology",
            "carrier": ["a", "b"],
            "opens": [[], ["a", "c"], ["a", "b"]]
        }"#;
        match loads(text).unwrap_err() {
            InterchangeError::UnknownLabel(l) => assert_eq!(l, "c"),
            other => panic!("unexpected {other:?}"),
        }
        let dup = r#"{
            "format_version": 1,
            "kind": "pretopology",
            "carrier": ["a", "a"],
            "opens": [[], ["a"]]
        }"#;
        assert!(matches!(loads(dup).unwrap_err(), InterchangeError::DuplicateLabel(_)));
    }

    #[test]
    fn union_closure_failures_are_axiom_errors_not_format_errors() {
        let text = r#"{
            "format_version": 1,
            "kind": "pretopology",
            "carrier": ["a", "b", "c"],
            "opens": [[], ["a"], ["b"], ["a", "b", "c"]]
        }"#;
        let err = loads(text).unwrap_err();
        assert!(!err.is_format());
        assert!(matches!(err, InterchangeError::Pretop(_)));
        let bad_json = "{ not json";
        assert!(loads(bad_json).unwrap_err().is_format());
    }

    #[test]
    fn nearness_lists_are_closed_upward_with_a_warning() {
        let text = r#"{
            "format_version": 1,
            "kind": "preproximity",
            "carrier": ["a", "b"],
            "near": [[["a"], ["a"]], [["b"], ["b"]]]
        }"#;
        let back = loads(text).unwrap();
        assert_eq!(back.warnings.len(), 1);
        match back.structure {
            Structure::Preproximity(d) => {
                assert_eq!(d, PreProximity::discrete(2));
            }
            other => panic!("wrong kind {}", other.kind_name()),
        }
        // A complete listing reloads without warnings.
        let full = preproximity_doc(&PreProximity::discrete(2), &labels(2));
        assert!(loads(&save(&full)).unwrap().warnings.is_empty());
    }

    #[test]
    fn pseudometric_rationals_are_exact() {
        use num::BigInt;
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let entries = vec![
            BigRational::from_integer(BigInt::from(0)),
            third.clone(),
            third.clone(),
            BigRational::from_integer(BigInt::from(0)),
        ];
        let rho = Pseudometric::new(2, entries).unwrap();
        let doc = pseudometric_doc(&rho, &labels(2));
        let text = save(&doc);
        assert!(text.contains("\"1/3\""));
        match loads(&text).unwrap().structure {
            Structure::Pseudometric(r) => assert_eq!(r, rho),
            other => panic!("wrong kind {}", other.kind_name()),
        }
        let bad = text.replace("1/3", "one third");
        assert!(matches!(
            loads(&bad).unwrap_err(),
            InterchangeError::BadRational(_)
        ));
    }

    #[test]
    fn group_documents_round_trip_with_prebase() {
        let g = GroupTable::cyclic(2);
        let tau = PreTopology::discrete(2);
        let prebase = vec![Subset::singleton(2, 0)];
        let doc = group_doc(&g, &tau, Some(&prebase), &labels(2));
        let back = loads(&save(&doc)).unwrap();
        match back.structure {
            Structure::Pretopgroup { group, tau: t, prebase: p } => {
                assert_eq!(group, g);
                assert_eq!(t, tau);
                assert_eq!(p, Some(prebase));
            }
            other => panic!("wrong kind {}", other.kind_name()),
        }
    }

    #[test]
    fn version_and_kind_guards() {
        let text = r#"{
            "format_version": 2,
            "kind": "pretopology",
            "carrier": ["a"],
            "opens": [[], ["a"]]
        }"#;
        assert!(matches!(loads(text).unwrap_err(), InterchangeError::BadVersion(2)));
        let cert = r#"{
            "format_version": 1,
            "kind": "exhaustion",
            "target": "x",
            "structure_kind": "pretopology",
            "carrier_bound": 2,
            "size_bound": 4,
            "examined": 3
        }"#;
        assert!(matches!(
            loads(cert).unwrap_err(),
            InterchangeError::WrongKind { .. }
        ));
    }
}
