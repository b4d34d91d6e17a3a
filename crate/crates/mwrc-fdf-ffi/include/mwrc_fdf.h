#ifndef MWRC_FDF_H
#define MWRC_FDF_H

/* Generated by cbindgen from mwrc-fdf-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Objective selector for optimization calls.
typedef enum {
  // Maximize the rate every user gets simultaneously.
  MWRC_OBJECTIVE_COMMON = 0,
  // Maximize total throughput.
  MWRC_OBJECTIVE_SUM = 1,
} MwrcObjective;

// Result of every fallible call.
typedef enum {
  // Success; out-parameters are filled.
  MWRC_STATUS_OK = 0,
  // A required pointer was null.
  MWRC_STATUS_NULL_POINTER,
  // A string argument was not valid UTF-8.
  MWRC_STATUS_INVALID_UTF8,
  // Arguments violate a precondition (bad SNR, label, pair syntax, ...).
  MWRC_STATUS_INVALID_ARGUMENT,
  // The pairing's client graph is not a spanning tree, so the exchange is
  // not decodable.
  MWRC_STATUS_NOT_A_TREE,
  // The channel leaves the regime where the sum-rate closed form holds.
  MWRC_STATUS_WEAK_BOUND,
  // Too many users for exhaustive tree enumeration.
  MWRC_STATUS_TOO_MANY_USERS,
  // The provided buffer cannot hold the result.
  MWRC_STATUS_BUFFER_TOO_SMALL,
} MwrcStatus;

// Opaque channel-state handle.
typedef struct MwrcChannel MwrcChannel;

// Opaque pairing handle.
typedef struct MwrcPairing MwrcPairing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a channel from `n` uplink SNRs (linear). `gamma_d` points to the
// minimum downlink SNR, or is null when downlink limits will not apply.
//
// # Safety
// `gammas` must point to `n` readable doubles, `gamma_d` to one readable
// double or be null, and `out` to a writable handle slot.
MwrcStatus mwrc_channel_from_snrs(const double *gammas,
                                  size_t n,
                                  const double *gamma_d,
                                  MwrcChannel **out);

// Builds a channel from `n` amplitude gains and powers: user `i` gets uplink
// SNR `p_user * gain_i^2 / noise_var` and downlink SNR
// `p_relay * gain_i^2 / noise_var`.
//
// # Safety
// `gains` must point to `n` readable doubles and `out` to a writable handle
// slot.
MwrcStatus mwrc_channel_from_gains(const double *gains,
                                   size_t n,
                                   double p_user,
                                   double p_relay,
                                   double noise_var,
                                   MwrcChannel **out);

// Releases a channel handle. Null is a no-op.
//
// # Safety
// `ch` must be a handle from a channel constructor, not yet freed, or null.
void mwrc_channel_free(MwrcChannel *ch);

// Number of users, or 0 for a null handle.
//
// # Safety
// `ch` must be a live channel handle or null.
size_t mwrc_channel_n(const MwrcChannel *ch);

// Copies the canonical (sorted) uplink SNRs into `out`.
//
// # Safety
// `ch` must be a live channel handle and `out` writable for `cap` doubles.
MwrcStatus mwrc_channel_gammas(const MwrcChannel *ch, double *out, size_t cap);

// Writes the minimum downlink SNR to `out`.
//
// # Safety
// `ch` must be a live channel handle and `out` writable.
MwrcStatus mwrc_channel_gamma_d(const MwrcChannel *ch, double *out);

// Parses a pairing such as `"1-2,2-3,3-4"` over users `1..=n`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable handle slot.
MwrcStatus mwrc_pairing_parse(const char *text, size_t n, MwrcPairing **out);

// Builds the chain pairing `1-2,2-3,...,(n-1)-n`.
//
// # Safety
// `out` must be a writable handle slot.
MwrcStatus mwrc_pairing_chain(size_t n, MwrcPairing **out);

// Builds the star pairing with every other user paired to `center`.
//
// # Safety
// `out` must be a writable handle slot.
MwrcStatus mwrc_pairing_star(size_t n, size_t center, MwrcPairing **out);

// Releases a pairing handle. Null is a no-op.
//
// # Safety
// `p` must be a handle from a pairing constructor, not yet freed, or null.
void mwrc_pairing_free(MwrcPairing *p);

// Number of pairs in the pairing, or 0 for a null handle.
//
// # Safety
// `p` must be a live pairing handle or null.
size_t mwrc_pairing_pair_count(const MwrcPairing *p);

// Writes whether the pairing's client graph is a spanning tree (i.e. the
// exchange is decodable) to `out`.
//
// # Safety
// `p` must be a live pairing handle and `out` writable.
MwrcStatus mwrc_pairing_is_feasible(const MwrcPairing *p, bool *out);

// Formats the pairing as `"a-b,c-d"` into `buf` (NUL-terminated).
//
// When `buf` is null the required capacity (text plus NUL) is written to
// `written` instead. On success `written` receives the text length without
// the NUL. `written` may be null if unwanted.
//
// # Safety
// `p` must be a live pairing handle; unless null, `buf` must be writable for
// `cap` bytes and `written` for one `size_t`.
MwrcStatus mwrc_pairing_format(const MwrcPairing *p, char *buf, size_t cap, size_t *written);

// Evaluates the rates `pairing` achieves on `ch`.
//
// Per-user rates land in `per_user` (canonical order) when it is non-null;
// the common (minimum) and sum rates land in `common` and `sum` when those
// are non-null. With `apply_downlink` the broadcast bottleneck
// `log2(1 + gamma_d)` caps every user.
//
// # Safety
// `ch` and `pairing` must be live handles; unless null, `per_user` must be
// writable for `per_user_cap` doubles and `common`/`sum` for one double.
MwrcStatus mwrc_evaluate(const MwrcChannel *ch,
                         const MwrcPairing *pairing,
                         bool apply_downlink,
                         double *per_user,
                         size_t per_user_cap,
                         double *common,
                         double *sum);

// Writes the closed-form optimal common rate (achieved by the chain).
//
// # Safety
// `ch` must be a live channel handle and `out` writable.
MwrcStatus mwrc_common_rate_closed_form(const MwrcChannel *ch, double *out);

// Writes the closed-form optimal sum rate (achieved by the star at the
// weakest user). Fails with `MWRC_STATUS_WEAK_BOUND` outside the closed
// form's SNR regime.
//
// # Safety
// `ch` must be a live channel handle and `out` writable.
MwrcStatus mwrc_sum_rate_closed_form(const MwrcChannel *ch, double *out);

// Exhaustively searches all labeled trees for the best pairing under
// `objective`. The winning pairing lands in `out_pairing` (caller frees) and
// its objective value in `out_value`.
//
// # Safety
// `ch` must be a live channel handle, `out_pairing` a writable handle slot,
// and `out_value` writable.
MwrcStatus mwrc_brute_force_best(const MwrcChannel *ch,
                                 MwrcObjective objective,
                                 bool apply_downlink,
                                 MwrcPairing **out_pairing,
                                 double *out_value);

// Sum-rate search that may silence weak users: the winning pairing spans the
// active users only. Active canonical labels land in `active` (when non-null,
// capacity permitting), their count in `active_len`, and the number of
// relaying phases in `phases` (when non-null).
//
// # Safety
// `ch` must be a live channel handle, `out_pairing` a writable handle slot,
// and `out_value` writable; unless null, `active` must be writable for
// `active_cap` `size_t`s and `active_len`/`phases` for one `size_t`.
MwrcStatus mwrc_silencing_search(const MwrcChannel *ch,
                                 MwrcPairing **out_pairing,
                                 double *out_value,
                                 size_t *active,
                                 size_t active_cap,
                                 size_t *active_len,
                                 size_t *phases);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MWRC_FDF_H */
