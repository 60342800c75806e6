//! C ABI over the finite-model laboratory.
//!
//! The surface is JSON-string oriented: structures travel as interchange
//! documents, handles are opaque, and every failure is an error code plus
//! a retrievable message. Strings returned by this library are owned by
//! the caller and must be released with `prelab_string_free`; handles
//! with `prelab_structure_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use prelab::interchange::{self, InterchangeError, Loaded, Structure};
use prelab::metrics;
use prelab::preprox;
use prelab::pretop::PreTopology;
use prelab::preunif::{self, PreUniformity};
use prelab::search::{self, SearchError, SearchKind, SearchSpec};

/// Result of every fallible call.
#[repr(C)]
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PrelabStatus {
    /// The call succeeded.
    Ok = 0,
    /// The input could not be parsed or has the wrong shape.
    FormatError = 1,
    /// The input parsed but an axiom or replay check failed.
    AxiomError = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
    /// The requested operation is not defined for this structure kind.
    Unsupported = 5,
}

/// Opaque handle to a decoded structure document.
pub struct PrelabStructure {
    loaded: Loaded,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let cleaned: String = message.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(cleaned).expect("nul bytes removed"));
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: PrelabStatus, message: String) -> PrelabStatus {
    set_error(message);
    status
}

fn interchange_status(e: &InterchangeError) -> PrelabStatus {
    if e.is_format() {
        PrelabStatus::FormatError
    } else {
        PrelabStatus::AxiomError
    }
}

fn to_c_string(text: String) -> *mut c_char {
    let cleaned: String = text.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    CString::new(cleaned).expect("nul bytes removed").into_raw()
}

unsafe fn input_str<'a>(ptr: *const c_char) -> Result<&'a str, PrelabStatus> {
    if ptr.is_null() {
        return Err(fail(PrelabStatus::NullPointer, "null string argument".to_string()));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        fail(PrelabStatus::InvalidUtf8, "string argument is not valid UTF-8".to_string())
    })
}

/// Version of the interchange format this library reads and writes.
#[no_mangle]
pub extern "C" fn prelab_format_version() -> u32 {
    interchange::FORMAT_VERSION
}

/// The most recent error message on this thread, or null if the last call
/// succeeded. The caller owns the returned string.
#[no_mangle]
pub extern "C" fn prelab_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn prelab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Decodes an interchange document into a structure handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prelab_load(
    json: *const c_char,
    out: *mut *mut PrelabStructure,
) -> PrelabStatus {
    if out.is_null() {
        return fail(PrelabStatus::NullPointer, "null output argument".to_string());
    }
    *out = ptr::null_mut();
    let text = match input_str(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match interchange::loads(text) {
        Ok(loaded) => {
            clear_error();
            *out = Box::into_raw(Box::new(PrelabStructure { loaded }));
            PrelabStatus::Ok
        }
        Err(e) => fail(interchange_status(&e), e.to_string()),
    }
}

/// Releases a structure handle. Null is accepted.
///
/// # Safety
/// `handle` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn prelab_structure_free(handle: *mut PrelabStructure) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// The document kind of a handle ("pretopology", "preuniformity-basis",
/// "pseudometric", "entourage-chain", "preproximity", or "pretopgroup").
/// Returns null on a null handle.
///
/// # Safety
/// `handle` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn prelab_kind(handle: *const PrelabStructure) -> *mut c_char {
    match handle.as_ref() {
        None => ptr::null_mut(),
        Some(h) => to_c_string(h.loaded.structure.kind_name().to_string()),
    }
}

/// Number of carrier points. Returns 0 on a null handle.
///
/// # Safety
/// `handle` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn prelab_carrier_size(handle: *const PrelabStructure) -> usize {
    match handle.as_ref() {
        None => 0,
        Some(h) => h.loaded.labels.len(),
    }
}

/// Serializes a handle back to its canonical interchange document.
/// Returns null on a null handle.
///
/// # Safety
/// `handle` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn prelab_save(handle: *const PrelabStructure) -> *mut c_char {
    match handle.as_ref() {
        None => ptr::null_mut(),
        Some(h) => {
            let env = interchange::structure_doc(&h.loaded.structure, &h.loaded.labels);
            to_c_string(interchange::save(&env))
        }
    }
}

fn verify_report(structure: &Structure) -> (bool, String) {
    let (valid, failed, classification) = match structure {
        Structure::Pretopology(_) | Structure::Pseudometric(_) | Structure::EntourageChain(_) => {
            (true, Vec::new(), serde_json::Value::Null)
        }
        Structure::PreuniformityBasis(basis) => {
            let report = preunif::check_axioms(basis);
            let failed = report.failed_core_axioms();
            let cls = report.classification;
            (
                failed.is_empty(),
                failed,
                serde_json::json!({
                    "preuniformity": cls.preuniformity,
                    "symmetric": cls.symmetric,
                    "strong": cls.strong,
                    "almost_uniform": cls.almost_uniform,
                    "uniform": cls.uniform,
                }),
            )
        }
        Structure::Preproximity(delta) => {
            let report = preprox::check_pp_axioms(delta);
            let failed = report.failed_core_axioms();
            let cls = report.classification();
            (
                failed.is_empty(),
                failed,
                serde_json::json!({
                    "preproximity": cls.preproximity,
                    "proximity": cls.proximity,
                }),
            )
        }
        Structure::Pretopgroup { group, tau, prebase } => {
            let mut failed = Vec::new();
            if !prelab::groups::is_pretopological_group(group, tau).expect("same carrier") {
                failed.push("pre-continuity".to_string());
            }
            if let Some(b_e) = prebase {
                if prelab::groups::validate_prebase(group, tau, b_e).is_err() {
                    failed.push("prebase".to_string());
                }
            }
            (failed.is_empty(), failed, serde_json::Value::Null)
        }
    };
    let report = serde_json::json!({
        "kind": structure.kind_name(),
        "valid": valid,
        "failed": failed,
        "classification": classification,
    });
    (valid, serde_json::to_string_pretty(&report).expect("serializable") + "\n")
}

/// Checks every axiom of the structure. Returns `Ok` when all pass and
/// `AxiomError` when some fail; either way `report_out` (if non-null)
/// receives a JSON report naming the failed axioms.
///
/// # Safety
/// `handle` must be a live handle; `report_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn prelab_verify(
    handle: *const PrelabStructure,
    report_out: *mut *mut c_char,
) -> PrelabStatus {
    if !report_out.is_null() {
        *report_out = ptr::null_mut();
    }
    let h = match handle.as_ref() {
        None => return fail(PrelabStatus::NullPointer, "null handle".to_string()),
        Some(h) => h,
    };
    let (valid, report) = verify_report(&h.loaded.structure);
    if !report_out.is_null() {
        *report_out = to_c_string(report);
    }
    if valid {
        clear_error();
        PrelabStatus::Ok
    } else {
        fail(PrelabStatus::AxiomError, "axiom failure; see the report".to_string())
    }
}

fn validated(structure: &Structure) -> Result<PreUniformity, (PrelabStatus, String)> {
    match structure {
        Structure::PreuniformityBasis(b) => PreUniformity::new(b.clone())
            .map_err(|e| (PrelabStatus::AxiomError, format!("validity axioms fail: {e}"))),
        other => Err((
            PrelabStatus::Unsupported,
            format!("expected a preuniformity-basis document, found {}", other.kind_name()),
        )),
    }
}

fn derive_structure(
    structure: &Structure,
    construction: &str,
) -> Result<Structure, (PrelabStatus, String)> {
    let name = construction.replace('_', "-");
    match name.as_str() {
        "tau" => {
            let tau: PreTopology = match structure {
                Structure::Pretopology(t) => t.clone(),
                Structure::PreuniformityBasis(b) => b.induced_pretopology(),
                Structure::Preproximity(d) => d.induced_pretopology().map_err(|e| {
                    (
                        PrelabStatus::AxiomError,
                        format!("nearness closure does not induce a pre-topology: {e}"),
                    )
                })?,
                Structure::Pseudometric(rho) => metrics::induced_from_pseudometric(rho)
                    .map_err(|e| (PrelabStatus::AxiomError, e.to_string()))?
                    .induced_pretopology(),
                Structure::Pretopgroup { tau, .. } => tau.clone(),
                Structure::EntourageChain(_) => {
                    return Err((
                        PrelabStatus::Unsupported,
                        "entourage-chain documents have no induced pre-topology".to_string(),
                    ))
                }
            };
            Ok(Structure::Pretopology(tau))
        }
        "delta" => {
            let mu = validated(structure)?;
            let delta = preprox::delta_from_preuniformity(&mu)
                .map_err(|e| (PrelabStatus::AxiomError, e.to_string()))?;
            Ok(Structure::Preproximity(delta))
        }
        "mu-delta" => match structure {
            Structure::Preproximity(d) => {
                let mu = preprox::mu_delta(d)
                    .map_err(|e| (PrelabStatus::AxiomError, e.to_string()))?;
                Ok(Structure::PreuniformityBasis(mu.basis().clone()))
            }
            other => Err((
                PrelabStatus::Unsupported,
                format!("expected a preproximity document, found {}", other.kind_name()),
            )),
        },
        "coreflection" => {
            let mu = validated(structure)?;
            let star = preunif::coreflection(&mu);
            Ok(Structure::PreuniformityBasis(star.basis().clone()))
        }
        "chain-pseudometric" => match structure {
            Structure::EntourageChain(chain) => {
                Ok(Structure::Pseudometric(metrics::chain_pseudometric(chain)))
            }
            other => Err((
                PrelabStatus::Unsupported,
                format!("expected an entourage-chain document, found {}", other.kind_name()),
            )),
        },
        other => Err((
            PrelabStatus::Unsupported,
            format!(
                "unknown construction {other:?}; expected tau, delta, mu_delta, coreflection, \
                 or chain-pseudometric"
            ),
        )),
    }
}

/// Applies a unary construction (tau, delta, mu_delta, coreflection,
/// chain-pseudometric) and returns a new handle carrying the same labels.
///
/// # Safety
/// `handle` must be a live handle; `construction` a NUL-terminated string;
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prelab_derive(
    handle: *const PrelabStructure,
    construction: *const c_char,
    out: *mut *mut PrelabStructure,
) -> PrelabStatus {
    if out.is_null() {
        return fail(PrelabStatus::NullPointer, "null output argument".to_string());
    }
    *out = ptr::null_mut();
    let h = match handle.as_ref() {
        None => return fail(PrelabStatus::NullPointer, "null handle".to_string()),
        Some(h) => h,
    };
    let name = match input_str(construction) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match derive_structure(&h.loaded.structure, name) {
        Ok(structure) => {
            clear_error();
            let loaded = Loaded {
                structure,
                labels: h.loaded.labels.clone(),
                warnings: Vec::new(),
            };
            *out = Box::into_raw(Box::new(PrelabStructure { loaded }));
            PrelabStatus::Ok
        }
        Err((status, message)) => fail(status, message),
    }
}

/// Writes the separation profile of the structure's (induced)
/// pre-topology as a JSON object.
///
/// # Safety
/// `handle` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prelab_separation_profile(
    handle: *const PrelabStructure,
    out: *mut *mut c_char,
) -> PrelabStatus {
    if out.is_null() {
        return fail(PrelabStatus::NullPointer, "null output argument".to_string());
    }
    *out = ptr::null_mut();
    let h = match handle.as_ref() {
        None => return fail(PrelabStatus::NullPointer, "null handle".to_string()),
        Some(h) => h,
    };
    let derived = derive_structure(&h.loaded.structure, "tau");
    let tau = match &derived {
        Ok(Structure::Pretopology(t)) => t,
        Ok(_) => unreachable!("tau derives a pre-topology"),
        Err((status, message)) => return fail(*status, message.clone()),
    };
    let p = tau.separation_profile();
    let json = serde_json::json!({
        "t0": p.t0,
        "t1": p.t1,
        "t2": p.t2,
        "regular": p.regular,
        "completely_regular": p.completely_regular,
        "normal": p.normal,
    });
    *out = to_c_string(serde_json::to_string_pretty(&json).expect("serializable") + "\n");
    clear_error();
    PrelabStatus::Ok
}

fn search_status(e: &SearchError) -> PrelabStatus {
    match e {
        SearchError::Interchange(inner) => interchange_status(inner),
        _ => PrelabStatus::FormatError,
    }
}

/// Runs a hunt from a JSON spec `{"kind", "carrier_bound", "size_bound",
/// "target"}` and writes the canonical certificate or exhaustion record.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; `outcome_out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn prelab_search(
    spec_json: *const c_char,
    outcome_out: *mut *mut c_char,
) -> PrelabStatus {
    if outcome_out.is_null() {
        return fail(PrelabStatus::NullPointer, "null output argument".to_string());
    }
    *outcome_out = ptr::null_mut();
    let text = match input_str(spec_json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    #[derive(serde::Deserialize)]
    struct SpecFile {
        kind: String,
        carrier_bound: usize,
        #[serde(default = "default_size_bound")]
        size_bound: usize,
        target: String,
    }
    fn default_size_bound() -> usize {
        usize::MAX >> 1
    }
    let parsed: SpecFile = match serde_json::from_str(text) {
        Ok(p) => p,
        Err(e) => return fail(PrelabStatus::FormatError, format!("invalid spec: {e}")),
    };
    let kind = match SearchKind::from_str(&parsed.kind) {
        Some(k) => k,
        None => {
            return fail(
                PrelabStatus::FormatError,
                format!("unknown structure kind {:?}", parsed.kind),
            )
        }
    };
    let spec = SearchSpec {
        kind,
        carrier_bound: parsed.carrier_bound,
        size_bound: parsed.size_bound,
        target: parsed.target,
    };
    match search::hunt(&spec) {
        Ok(outcome) => {
            clear_error();
            *outcome_out = to_c_string(interchange::save(&outcome.to_envelope()));
            PrelabStatus::Ok
        }
        Err(e) => fail(search_status(&e), e.to_string()),
    }
}

/// Replays a certificate document from its bytes alone. On success writes
/// 1 to `ok_out` when the replay matches and 0 when it does not (the call
/// itself returns `Ok` in both cases).
///
/// # Safety
/// `json` must be a NUL-terminated string; `ok_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prelab_verify_certificate(
    json: *const c_char,
    ok_out: *mut u8,
) -> PrelabStatus {
    if ok_out.is_null() {
        return fail(PrelabStatus::NullPointer, "null output argument".to_string());
    }
    *ok_out = 0;
    let text = match input_str(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let env: interchange::Envelope = match serde_json::from_str(text) {
        Ok(e) => e,
        Err(e) => return fail(PrelabStatus::FormatError, format!("invalid document: {e}")),
    };
    match search::verify_certificate(&env) {
        Ok(ok) => {
            clear_error();
            *ok_out = u8::from(ok);
            PrelabStatus::Ok
        }
        Err(SearchError::MalformedCertificate(m)) => fail(PrelabStatus::FormatError, m),
        Err(e) => fail(search_status(&e), e.to_string()),
    }
}
