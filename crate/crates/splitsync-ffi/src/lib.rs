//! C ABI for the splitsync automata library.
//!
//! Automata are opaque handles created by [`sx_automaton_parse`] (from the
//! text format) or [`sx_catalog`], and released with [`sx_automaton_free`].
//! Every fallible call returns an [`SxStatus`]; results are written through
//! out-pointers, which may be null when the caller does not need them.
//! Strings returned by the library must be released with
//! [`sx_string_free`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use splitsync::automaton::Automaton;
use splitsync::classes::best_bound;
use splitsync::critical::catalog;
use splitsync::directing::{d3_implicit_with, d3_oracle, d3_via_split_with, verify_d3};
use splitsync::io::{parse, serialize, AutomatonDoc};
use splitsync::split::full_split_with;
use splitsync::{Budget, Error};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SxStatus {
    /// Success.
    Ok = 0,
    /// The automaton admits no directing word (not an error).
    NotDirecting = 1,
    /// Malformed input text; see the line/column out-parameters of
    /// `sx_automaton_parse`.
    ParseError = 2,
    /// A configured resource budget was exceeded.
    BudgetExceeded = 3,
    /// A catalog data file is missing or failed verification.
    MissingData = 4,
    /// A null pointer or otherwise invalid argument was passed.
    InvalidArgument = 5,
    /// The operation is defined but not supported for this input size.
    Unsupported = 6,
    /// Internal error (a bug in the library).
    InternalError = 7,
}

/// Directing-word engines.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SxEngine {
    /// Subset walk with on-the-fly choice expansion (the default).
    Implicit = 0,
    /// Materialize the split DFA first.
    Split = 1,
    /// Definition-level check, at most 4 states.
    Oracle = 2,
}

/// Opaque automaton handle.
pub struct SxAutomaton {
    inner: Automaton,
}

fn status_of(e: &Error) -> SxStatus {
    match e {
        Error::Parse { .. } => SxStatus::ParseError,
        Error::BudgetExceeded { .. } => SxStatus::BudgetExceeded,
        Error::MissingData(_) | Error::CatalogVerification { .. } => SxStatus::MissingData,
        Error::Unsupported(_) => SxStatus::Unsupported,
        _ => SxStatus::InvalidArgument,
    }
}

fn guarded(body: impl FnOnce() -> SxStatus) -> SxStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => SxStatus::InternalError,
    }
}

unsafe fn write_out<T>(ptr: *mut T, value: T) {
    if !ptr.is_null() {
        ptr.write(value);
    }
}

/// Parse an automaton from the text format.
///
/// On success `*out` receives a new handle that must be freed with
/// [`sx_automaton_free`]. On a parse error, `*error_line` and `*error_col`
/// (when non-null) receive the 1-based position of the diagnostic.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out`, `error_line` and
/// `error_col` must each be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sx_automaton_parse(
    text: *const c_char,
    out: *mut *mut SxAutomaton,
    error_line: *mut usize,
    error_col: *mut usize,
) -> SxStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return SxStatus::InvalidArgument;
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return SxStatus::InvalidArgument;
        };
        match parse(text) {
            Ok(doc) => {
                let handle = Box::new(SxAutomaton {
                    inner: doc.automaton().clone(),
                });
                write_out(out, Box::into_raw(handle));
                SxStatus::Ok
            }
            Err(e) => {
                if let Error::Parse { line, col, .. } = &e {
                    write_out(error_line, *line);
                    write_out(error_col, *col);
                }
                status_of(&e)
            }
        }
    })
}

/// Release a handle returned by this library. Null is a no-op.
///
/// # Safety
/// `a` must be null or a pointer previously returned by this library that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn sx_automaton_free(a: *mut SxAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Serialize an automaton to the text format. Returns a newly allocated
/// string (free with [`sx_string_free`]), or null on invalid input.
///
/// # Safety
/// `a` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn sx_automaton_serialize(a: *const SxAutomaton) -> *mut c_char {
    if a.is_null() {
        return ptr::null_mut();
    }
    let text = serialize(&AutomatonDoc::from_automaton(&(*a).inner));
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string previously returned by this library that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn sx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of states.
///
/// # Safety
/// `a` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn sx_automaton_states(a: *const SxAutomaton) -> usize {
    if a.is_null() {
        0
    } else {
        (*a).inner.n()
    }
}

/// Number of symbols.
///
/// # Safety
/// `a` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn sx_automaton_symbols(a: *const SxAutomaton) -> usize {
    if a.is_null() {
        0
    } else {
        (*a).inner.symbol_count()
    }
}

/// True iff every symbol is deterministic.
///
/// # Safety
/// `a` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn sx_automaton_is_deterministic(a: *const SxAutomaton) -> bool {
    !a.is_null() && (*a).inner.is_dfa()
}

/// Shortest directing word length. On success `*out_length` receives the
/// length and `*out_sync_state` a synchronizing state (1-based). Returns
/// `SX_STATUS_NOT_DIRECTING` when no directing word exists.
///
/// # Safety
/// `a` must be a valid handle; out-pointers must be null or valid writes.
#[no_mangle]
pub unsafe extern "C" fn sx_shortest_directing(
    a: *const SxAutomaton,
    engine: SxEngine,
    out_length: *mut usize,
    out_sync_state: *mut usize,
) -> SxStatus {
    guarded(|| {
        if a.is_null() {
            return SxStatus::InvalidArgument;
        }
        let budget = Budget::from_env();
        let result = match engine {
            SxEngine::Implicit => d3_implicit_with(&(*a).inner, &budget),
            SxEngine::Split => d3_via_split_with(&(*a).inner, &budget),
            SxEngine::Oracle => d3_oracle(&(*a).inner),
        };
        match result {
            Ok(report) if report.directing => {
                write_out(out_length, report.length.unwrap_or(0));
                write_out(out_sync_state, report.sync_state.unwrap_or(0));
                SxStatus::Ok
            }
            Ok(_) => SxStatus::NotDirecting,
            Err(e) => status_of(&e),
        }
    })
}

/// Verify a candidate directing word given as 0-based symbol indices.
/// `SX_STATUS_OK` means the word directs the automaton and
/// `*out_sync_state` receives a synchronizing state;
/// `SX_STATUS_NOT_DIRECTING` means it does not.
///
/// # Safety
/// `a` must be a valid handle; `letters` must point to `length` readable
/// values (may be null when `length` is 0); `out_sync_state` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sx_verify_word(
    a: *const SxAutomaton,
    letters: *const usize,
    length: usize,
    out_sync_state: *mut usize,
) -> SxStatus {
    guarded(|| {
        if a.is_null() || (letters.is_null() && length > 0) {
            return SxStatus::InvalidArgument;
        }
        let word: Vec<usize> = if length == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(letters, length).to_vec()
        };
        match verify_d3(&(*a).inner, &word) {
            Ok(v) if v.accepted => {
                write_out(out_sync_state, v.sync_states.min_state().unwrap_or(0));
                SxStatus::Ok
            }
            Ok(_) => SxStatus::NotDirecting,
            Err(e) => status_of(&e),
        }
    })
}

/// Fully split the automaton into the equivalent DFA. On success `*out`
/// receives a new handle.
///
/// # Safety
/// `a` must be a valid handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sx_split(a: *const SxAutomaton, out: *mut *mut SxAutomaton) -> SxStatus {
    guarded(|| {
        if a.is_null() || out.is_null() {
            return SxStatus::InvalidArgument;
        }
        match full_split_with(&(*a).inner, &Budget::from_env()) {
            Ok(split) => {
                let handle = Box::new(SxAutomaton {
                    inner: split.automaton,
                });
                write_out(out, Box::into_raw(handle));
                SxStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Tightest known directing-length bound across all detected classes.
///
/// # Safety
/// `a` must be a valid handle; `out_bound` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sx_best_bound(a: *const SxAutomaton, out_bound: *mut u64) -> SxStatus {
    guarded(|| {
        if a.is_null() {
            return SxStatus::InvalidArgument;
        }
        let report = best_bound(&(*a).inner);
        write_out(out_bound, report.tightest.value);
        SxStatus::Ok
    })
}

/// Look up a catalog automaton by name (`cerny`, `cerny-cnfa`, `a3`, `a4`,
/// `c4`, `t42`, `roman`, `kari`). `n` selects the size for the parametric
/// families and must be 0 for the fixed ones.
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sx_catalog(
    name: *const c_char,
    n: usize,
    out: *mut *mut SxAutomaton,
) -> SxStatus {
    guarded(|| {
        if name.is_null() || out.is_null() {
            return SxStatus::InvalidArgument;
        }
        let Ok(name) = CStr::from_ptr(name).to_str() else {
            return SxStatus::InvalidArgument;
        };
        match catalog(name, if n == 0 { None } else { Some(n) }) {
            Ok(entry) => {
                let handle = Box::new(SxAutomaton {
                    inner: entry.automaton,
                });
                write_out(out, Box::into_raw(handle));
                SxStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    const INTRO: &str = "cnfa 3\nsym a : 1,3 ; 2 ; 1\nsym b : 2 ; 1 ; 2,3\n";

    fn parse_handle(text: &str) -> *mut SxAutomaton {
        let c = CString::new(text).unwrap();
        let mut handle: *mut SxAutomaton = ptr::null_mut();
        let status = unsafe { sx_automaton_parse(c.as_ptr(), &mut handle, ptr::null_mut(), ptr::null_mut()) };
        assert_eq!(status, SxStatus::Ok);
        handle
    }

    #[test]
    fn parse_query_and_free() {
        let handle = parse_handle(INTRO);
        unsafe {
            assert_eq!(sx_automaton_states(handle), 3);
            assert_eq!(sx_automaton_symbols(handle), 2);
            assert!(!sx_automaton_is_deterministic(handle));
            sx_automaton_free(handle);
        }
    }

    #[test]
    fn parse_error_positions() {
        let c = CString::new("cnfa 3\nsym x :  ; 1 ; 2\n").unwrap();
        let mut handle: *mut SxAutomaton = ptr::null_mut();
        let mut line = 0usize;
        let mut col = 0usize;
        let status =
            unsafe { sx_automaton_parse(c.as_ptr(), &mut handle, &mut line, &mut col) };
        assert_eq!(status, SxStatus::ParseError);
        assert_eq!(line, 2);
        assert!(handle.is_null());
    }

    #[test]
    fn directing_length_over_the_ffi() {
        let handle = parse_handle(INTRO);
        for engine in [SxEngine::Implicit, SxEngine::Split, SxEngine::Oracle] {
            let mut length = 0usize;
            let mut state = 0usize;
            let status =
                unsafe { sx_shortest_directing(handle, engine, &mut length, &mut state) };
            assert_eq!(status, SxStatus::Ok);
            assert_eq!(length, 4);
            assert!((1..=3).contains(&state));
        }
        unsafe { sx_automaton_free(handle) };
    }

    #[test]
    fn not_directing_status() {
        let handle = parse_handle("cnfa 2\nsym a : 1 ; 2\n");
        let status = unsafe {
            sx_shortest_directing(handle, SxEngine::Implicit, ptr::null_mut(), ptr::null_mut())
        };
        assert_eq!(status, SxStatus::NotDirecting);
        unsafe { sx_automaton_free(handle) };
    }

    #[test]
    fn verify_word_over_the_ffi() {
        let handle = parse_handle(INTRO);
        // baba = indices 1,0,1,0
        let word = [1usize, 0, 1, 0];
        let mut sync = 0usize;
        let status = unsafe { sx_verify_word(handle, word.as_ptr(), 4, &mut sync) };
        assert_eq!(status, SxStatus::Ok);
        assert_eq!(sync, 1);
        let status = unsafe { sx_verify_word(handle, ptr::null(), 0, &mut sync) };
        assert_eq!(status, SxStatus::NotDirecting);
        unsafe { sx_automaton_free(handle) };
    }

    #[test]
    fn split_and_serialize_round_trip() {
        let handle = parse_handle(INTRO);
        let mut split: *mut SxAutomaton = ptr::null_mut();
        let status = unsafe { sx_split(handle, &mut split) };
        assert_eq!(status, SxStatus::Ok);
        unsafe {
            assert!(sx_automaton_is_deterministic(split));
            assert_eq!(sx_automaton_symbols(split), 4);
            let s = sx_automaton_serialize(split);
            assert!(!s.is_null());
            let text = CStr::from_ptr(s).to_str().unwrap().to_string();
            sx_string_free(s);
            let reparsed = parse_handle(&text);
            assert_eq!(sx_automaton_symbols(reparsed), 4);
            sx_automaton_free(reparsed);
            sx_automaton_free(split);
            sx_automaton_free(handle);
        }
    }

    #[test]
    fn bound_and_catalog() {
        let handle = parse_handle(INTRO);
        let mut bound = 0u64;
        assert_eq!(unsafe { sx_best_bound(handle, &mut bound) }, SxStatus::Ok);
        assert_eq!(bound, 4);
        unsafe { sx_automaton_free(handle) };

        let name = CString::new("cerny").unwrap();
        let mut cerny: *mut SxAutomaton = ptr::null_mut();
        assert_eq!(
            unsafe { sx_catalog(name.as_ptr(), 4, &mut cerny) },
            SxStatus::Ok
        );
        unsafe {
            assert_eq!(sx_automaton_states(cerny), 4);
            sx_automaton_free(cerny);
        }

        let bogus = CString::new("frobnicate").unwrap();
        let mut out: *mut SxAutomaton = ptr::null_mut();
        assert_eq!(
            unsafe { sx_catalog(bogus.as_ptr(), 0, &mut out) },
            SxStatus::InvalidArgument
        );
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            assert_eq!(
                sx_automaton_parse(ptr::null(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()),
                SxStatus::InvalidArgument
            );
            assert_eq!(
                sx_shortest_directing(ptr::null(), SxEngine::Implicit, ptr::null_mut(), ptr::null_mut()),
                SxStatus::InvalidArgument
            );
            sx_automaton_free(ptr::null_mut());
            sx_string_free(ptr::null_mut());
        }
    }
}
