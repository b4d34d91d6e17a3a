//! C ABI for the multiway relay channel rate library.
//!
//! Conventions: constructors hand back an opaque handle that the caller must
//! release with the matching `_free` function; every fallible call returns an
//! [`MwrcStatus`] and writes through its out-pointers only on
//! `MWRC_STATUS_OK`; user labels are canonical (1-based, sorted by uplink
//! SNR) exactly as in the Rust API. The C header is generated into
//! `include/mwrc_fdf.h` when this crate builds.

use std::ffi::{c_char, CStr};
use std::slice;

use mwrc_fdf::channel::ChannelState;
use mwrc_fdf::fdf_rates::evaluate;
use mwrc_fdf::optimizer::{
    brute_force_best, chain_pairing, common_rate_closed_form, silencing_search, star_pairing,
    sum_rate_closed_form, Objective,
};
use mwrc_fdf::pairing_graph::{is_feasible, Pairing};
use mwrc_fdf::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MwrcStatus {
    /// Success; out-parameters are filled.
    Ok = 0,
    /// A required pointer was null.
    NullPointer,
    /// A string argument was not valid UTF-8.
    InvalidUtf8,
    /// Arguments violate a precondition (bad SNR, label, pair syntax, ...).
    InvalidArgument,
    /// The pairing's client graph is not a spanning tree, so the exchange is
    /// not decodable.
    NotATree,
    /// The channel leaves the regime where the sum-rate closed form holds.
    WeakBound,
    /// Too many users for exhaustive tree enumeration.
    TooManyUsers,
    /// The provided buffer cannot hold the result.
    BufferTooSmall,
}

fn status_of(e: &Error) -> MwrcStatus {
    match e {
        Error::NotATree => MwrcStatus::NotATree,
        Error::WeakBoundViolation { .. } => MwrcStatus::WeakBound,
        Error::EnumerationCap { .. } => MwrcStatus::TooManyUsers,
        _ => MwrcStatus::InvalidArgument,
    }
}

/// Objective selector for optimization calls.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MwrcObjective {
    /// Maximize the rate every user gets simultaneously.
    Common = 0,
    /// Maximize total throughput.
    Sum = 1,
}

impl From<MwrcObjective> for Objective {
    fn from(o: MwrcObjective) -> Objective {
        match o {
            MwrcObjective::Common => Objective::Common,
            MwrcObjective::Sum => Objective::Sum,
        }
    }
}

/// Opaque channel-state handle.
pub struct MwrcChannel(ChannelState);

/// Opaque pairing handle.
pub struct MwrcPairing(Pairing);

fn emit_channel(out: *mut *mut MwrcChannel, ch: ChannelState) -> MwrcStatus {
    unsafe { *out = Box::into_raw(Box::new(MwrcChannel(ch))) };
    MwrcStatus::Ok
}

fn emit_pairing(out: *mut *mut MwrcPairing, p: Pairing) -> MwrcStatus {
    unsafe { *out = Box::into_raw(Box::new(MwrcPairing(p))) };
    MwrcStatus::Ok
}

/// Builds a channel from `n` uplink SNRs (linear). `gamma_d` points to the
/// minimum downlink SNR, or is null when downlink limits will not apply.
///
/// # Safety
/// `gammas` must point to `n` readable doubles, `gamma_d` to one readable
/// double or be null, and `out` to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mwrc_channel_from_snrs(
    gammas: *const f64,
    n: usize,
    gamma_d: *const f64,
    out: *mut *mut MwrcChannel,
) -> MwrcStatus {
    if gammas.is_null() || out.is_null() {
        return MwrcStatus::NullPointer;
    }
    let gammas = slice::from_raw_parts(gammas, n);
    let gamma_d = if gamma_d.is_null() { None } else { Some(*gamma_d) };
    match ChannelState::from_snrs(gammas, gamma_d) {
        Ok(ch) => emit_channel(out, ch),
        Err(e) => status_of(&e),
    }
}

/// Builds a channel from `n` amplitude gains and powers: user `i` gets uplink
/// SNR `p_user * gain_i^2 / noise_var` and downlink SNR
/// `p_relay * gain_i^2 / noise_var`.
///
/// # Safety
/// `gains` must point to `n` readable doubles and `out` to a writable handle
/// slot.
#[no_mangle]
pub unsafe extern "C" fn mwrc_channel_from_gains(
    gains: *const f64,
    n: usize,
    p_user: f64,
    p_relay: f64,
    noise_var: f64,
    out: *mut *mut MwrcChannel,
) -> MwrcStatus {
    if gains.is_null() || out.is_null() {
        return MwrcStatus::NullPointer;
    }
    let gains = slice::from_raw_parts(gains, n);
    match mwrc_fdf::channel::make_channel(gains, p_user, p_relay, noise_var) {
        Ok(ch) => emit_channel(out, ch),
        Err(e) => status_of(&e),
    }
}

/// Releases a channel handle. Null is a no-op.
///
/// # Safety
/// `ch` must be a handle from a channel constructor, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn mwrc_channel_free(ch: *mut MwrcChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Number of users, or 0 for a null handle.
///
/// # Safety
/// `ch` must be a live channel handle or null.
#[no_mangle]
pub unsafe extern "C" fn mwrc_channel_n(ch: *const MwrcChannel) -> usize {
    ch.as_ref().map_or(0, |c| c.0.n())
}

/// Copies the canonical (sorted) uplink SNRs into `out`.
///
/// # Safety
/// `ch` must be a live channel handle and `out` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn mwrc_channel_gammas(
    ch: *const MwrcChannel,
    out: *mut f64,
    cap: usize,
) -> MwrcStatus {
    let Some(ch) = ch.as_ref() else {
        return MwrcStatus::NullPointer;
    };
    if out.is_null() {
        return MwrcStatus::NullPointer;
    }
    let gammas = ch.0.gammas();
    if cap < gammas.len() {
        return MwrcStatus::BufferTooSmall;
    }
    slice::from_raw_parts_mut(out, gammas.len()).copy_from_slice(gammas);
    MwrcStatus::Ok
}

/// Writes the minimum downlink SNR to `out`.
///
/// # Safety
/// `ch` must be a live channel handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mwrc_channel_gamma_d(
    ch: *const MwrcChannel,
    out: *mut f64,
) -> MwrcStatus {
    let Some(ch) = ch.as_ref() else {
        return MwrcStatus::NullPointer;
    };
    if out.is_null() {
        return MwrcStatus::NullPointer;
    }
    *out = ch.0.gamma_d();
    MwrcStatus::Ok
}

/// Parses a pairing such as `"1-2,2-3,3-4"` over users `1..=n`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mwrc_pairing_parse(
    text: *const c_char,
    n: usize,
    out: *mut *mut MwrcPairing,
) -> MwrcStatus {
    if text.is_null() || out.is_null() {
        return MwrcStatus::NullPointer;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return MwrcStatus::InvalidUtf8;
    };
    match Pairing::parse(text, n) {
        Ok(p) => emit_pairing(out, p),
        Err(e) => status_of(&e),
    }
}

/// Builds the chain pairing `1-2,2-3,...,(n-1)-n`.
///
/// # Safety
/// `out` must be a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mwrc_pairing_chain(n: usize, out: *mut *mut MwrcPairing) -> MwrcStatus {
    if out.is_null() {
        return MwrcStatus::NullPointer;
    }
    if n < 2 {
        return MwrcStatus::InvalidArgument;
    }
    emit_pairing(out, chain_pairing(n))
}

/// Builds the star pairing with every other user paired to `center`.
///
/// # Safety
/// `out` must be a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mwrc_pairing_star(
    n: usize,
    center: usize,
    out: *mut *mut MwrcPairing,
) -> MwrcStatus {
    if out.is_null() {
        return MwrcStatus::NullPointer;
    }
    if n < 2 || center < 1 || center > n {
        return MwrcStatus::InvalidArgument;
    }
    emit_pairing(out, star_pairing(n, center))
}

/// Releases a pairing handle. Null is a no-op.
///
/// # Safety
/// `p` must be a handle from a pairing constructor, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn mwrc_pairing_free(p: *mut MwrcPairing) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of pairs in the pairing, or 0 for a null handle.
///
/// # Safety
/// `p` must be a live pairing handle or null.
#[no_mangle]
pub unsafe extern "C" fn mwrc_pairing_pair_count(p: *const MwrcPairing) -> usize {
    p.as_ref().map_or(0, |p| p.0.pairs().len())
}

/// Writes whether the pairing's client graph is a spanning tree (i.e. the
/// exchange is decodable) to `out`.
///
/// # Safety
/// `p` must be a live pairing handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mwrc_pairing_is_feasible(
    p: *const MwrcPairing,
    out: *mut bool,
) -> MwrcStatus {
    let Some(p) = p.as_ref() else {
        return MwrcStatus::NullPointer;
    };
    if out.is_null() {
        return MwrcStatus::NullPointer;
    }
    *out = is_feasible(&p.0);
    MwrcStatus::Ok
}

/// Formats the pairing as `"a-b,c-d"` into `buf` (NUL-terminated).
///
/// When `buf` is null the required capacity (text plus NUL) is written to
/// `written` instead. On success `written` receives the text length without
/// the NUL. `written` may be null if unwanted.
///
/// # Safety
/// `p` must be a live pairing handle; unless null, `buf` must be writable for
/// `cap` bytes and `written` for one `size_t`.
#[no_mangle]
pub unsafe extern "C" fn mwrc_pairing_format(
    p: *const MwrcPairing,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> MwrcStatus {
    let Some(p) = p.as_ref() else {
        return MwrcStatus::NullPointer;
    };
    let text = p.0.to_string();
    if buf.is_null() {
        let Some(written) = written.as_mut() else {
            return MwrcStatus::NullPointer;
        };
        *written = text.len() + 1;
        return MwrcStatus::Ok;
    }
    if cap < text.len() + 1 {
        return MwrcStatus::BufferTooSmall;
    }
    let dst = slice::from_raw_parts_mut(buf.cast::<u8>(), text.len() + 1);
    dst[..text.len()].copy_from_slice(text.as_bytes());
    dst[text.len()] = 0;
    if let Some(written) = written.as_mut() {
        *written = text.len();
    }
    MwrcStatus::Ok
}

/// Evaluates the rates `pairing` achieves on `ch`.
///
/// Per-user rates land in `per_user` (canonical order) when it is non-null;
/// the common (minimum) and sum rates land in `common` and `sum` when those
/// are non-null. With `apply_downlink` the broadcast bottleneck
/// `log2(1 + gamma_d)` caps every user.
///
/// # Safety
/// `ch` and `pairing` must be live handles; unless null, `per_user` must be
/// writable for `per_user_cap` doubles and `common`/`sum` for one double.
#[no_mangle]
pub unsafe extern "C" fn mwrc_evaluate(
    ch: *const MwrcChannel,
    pairing: *const MwrcPairing,
    apply_downlink: bool,
    per_user: *mut f64,
    per_user_cap: usize,
    common: *mut f64,
    sum: *mut f64,
) -> MwrcStatus {
    let (Some(ch), Some(pairing)) = (ch.as_ref(), pairing.as_ref()) else {
        return MwrcStatus::NullPointer;
    };
    if !per_user.is_null() && per_user_cap < ch.0.n() {
        return MwrcStatus::BufferTooSmall;
    }
    match evaluate(&pairing.0, &ch.0, apply_downlink) {
        Ok(report) => {
            if !per_user.is_null() {
                slice::from_raw_parts_mut(per_user, report.per_user.len())
                    .copy_from_slice(&report.per_user);
            }
            if let Some(common) = common.as_mut() {
                *common = report.common_rate;
            }
            if let Some(sum) = sum.as_mut() {
                *sum = report.sum_rate;
            }
            MwrcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Writes the closed-form optimal common rate (achieved by the chain).
///
/// # Safety
/// `ch` must be a live channel handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mwrc_common_rate_closed_form(
    ch: *const MwrcChannel,
    out: *mut f64,
) -> MwrcStatus {
    let Some(ch) = ch.as_ref() else {
        return MwrcStatus::NullPointer;
    };
    if out.is_null() {
        return MwrcStatus::NullPointer;
    }
    *out = common_rate_closed_form(&ch.0);
    MwrcStatus::Ok
}

/// Writes the closed-form optimal sum rate (achieved by the star at the
/// weakest user). Fails with `MWRC_STATUS_WEAK_BOUND` outside the closed
/// form's SNR regime.
///
/// # Safety
/// `ch` must be a live channel handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mwrc_sum_rate_closed_form(
    ch: *const MwrcChannel,
    out: *mut f64,
) -> MwrcStatus {
    let Some(ch) = ch.as_ref() else {
        return MwrcStatus::NullPointer;
    };
    if out.is_null() {
        return MwrcStatus::NullPointer;
    }
    match sum_rate_closed_form(&ch.0) {
        Ok(v) => {
            *out = v;
            MwrcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Exhaustively searches all labeled trees for the best pairing under
/// `objective`. The winning pairing lands in `out_pairing` (caller frees) and
/// its objective value in `out_value`.
///
/// # Safety
/// `ch` must be a live channel handle, `out_pairing` a writable handle slot,
/// and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn mwrc_brute_force_best(
    ch: *const MwrcChannel,
    objective: MwrcObjective,
    apply_downlink: bool,
    out_pairing: *mut *mut MwrcPairing,
    out_value: *mut f64,
) -> MwrcStatus {
    let Some(ch) = ch.as_ref() else {
        return MwrcStatus::NullPointer;
    };
    if out_pairing.is_null() || out_value.is_null() {
        return MwrcStatus::NullPointer;
    }
    match brute_force_best(&ch.0, objective.into(), apply_downlink) {
        Ok(best) => {
            *out_value = best.objective_value;
            emit_pairing(out_pairing, best.pairing)
        }
        Err(e) => status_of(&e),
    }
}

/// Sum-rate search that may silence weak users: the winning pairing spans the
/// active users only. Active canonical labels land in `active` (when non-null,
/// capacity permitting), their count in `active_len`, and the number of
/// relaying phases in `phases` (when non-null).
///
/// # Safety
/// `ch` must be a live channel handle, `out_pairing` a writable handle slot,
/// and `out_value` writable; unless null, `active` must be writable for
/// `active_cap` `size_t`s and `active_len`/`phases` for one `size_t`.
#[no_mangle]
pub unsafe extern "C" fn mwrc_silencing_search(
    ch: *const MwrcChannel,
    out_pairing: *mut *mut MwrcPairing,
    out_value: *mut f64,
    active: *mut usize,
    active_cap: usize,
    active_len: *mut usize,
    phases: *mut usize,
) -> MwrcStatus {
    let Some(ch) = ch.as_ref() else {
        return MwrcStatus::NullPointer;
    };
    if out_pairing.is_null() || out_value.is_null() {
        return MwrcStatus::NullPointer;
    }
    let result = silencing_search(&ch.0);
    if !active.is_null() {
        if active_cap < result.active_set.len() {
            return MwrcStatus::BufferTooSmall;
        }
        slice::from_raw_parts_mut(active, result.active_set.len())
            .copy_from_slice(&result.active_set);
    }
    if let Some(active_len) = active_len.as_mut() {
        *active_len = result.active_set.len();
    }
    if let Some(phases) = phases.as_mut() {
        *phases = result.phases;
    }
    *out_value = result.objective_value;
    emit_pairing(out_pairing, result.pairing)
}
