"""Compiled inner loops for the continuous-time simulator.

The sampler runs the thinned (uniformized) version of the chain's event
process: every monomer with a nonzero state attempts a move at rate 1, and
an attempt on a blocked monomer is a null event.  In a configuration with
k applicable moves out of m nonzero states, the time to the next actual
transition is then the sum of a Geometric(k/m) number of Exp(m) holding
times, which is Exp(k) exactly, and the realized transition is uniform
over the applicable set -- the law of the original chain, at the price of
one blocking test per attempt instead of one per monomer.

Permanent blocking is detected exactly: null events mark the drawn monomer
as blocked-in-this-configuration, and once every nonzero monomer carries
the mark the trajectory has ended (the marks reset whenever the
configuration changes).

Randomness is a splitmix64 stream per trajectory, seeded from a caller
supplied 64-bit value, so identical seeds give identical trajectories.
"""

import numpy as np
from numba import njit

#: unit displacements indexed by direction 0..5 (+x, +y, +w, -x, -y, -w)
_DX = np.array([1, 0, -1, -1, 0, 1], dtype=np.int64)
_DY = np.array([0, 1, 1, 0, -1, -1], dtype=np.int64)

#: direction index of a unit step, looked up at [dx + 1, dy + 1]
_DIR_OF = np.full((3, 3), -1, dtype=np.int64)
for _d in range(6):
    _DIR_OF[_DX[_d] + 1, _DY[_d] + 1] = _d

_SM_GAMMA = np.uint64(0x9E3779B97F4B7C15)
_SM_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_MUL2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / float(1 << 53)

OUTCOME_FINAL = 0
OUTCOME_BLOCKED = 1


@njit(cache=True, nogil=True)
def _sm_next(state):
    state = state + _SM_GAMMA
    z = state
    z = (z ^ (z >> np.uint64(30))) * _SM_MUL1
    z = (z ^ (z >> np.uint64(27))) * _SM_MUL2
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True, nogil=True)
def run_chain(st, px, py, seed, record, moves, times, safter, gstamp, gidx, stamp):
    """Sample one trajectory in place; st/px/py are working buffers.

    Returns (outcome, total_time, steps, stamp).  The grid buffers persist
    across calls; ``stamp`` versions their entries so they never need
    clearing.
    """
    n = st.shape[0]
    side = 2 * n + 3
    off = n + 1
    stamp += 1
    for i in range(n):
        g = (px[i] + off) * side + (py[i] + off)
        gstamp[g] = stamp
        gidx[g] = i

    nz = np.empty(n, np.int64)
    slot = np.full(n, -1, np.int64)
    m = 0
    for i in range(n):
        if st[i] != 0:
            nz[m] = i
            slot[i] = m
            m += 1

    last_blocked = np.full(n, -1, np.int64)
    version = 0
    nblocked = 0
    t = 0.0
    t_event = 0.0
    steps = 0
    rng = seed

    while m > 0:
        rng, z = _sm_next(rng)
        u = (float(z >> np.uint64(11)) + 1.0) * _U53  # uniform in (0, 1]
        t += -np.log(u) / m
        rng, z = _sm_next(rng)
        j = nz[np.int64(z % np.uint64(m))]

        dlx = np.int64(0)
        dly = np.int64(0)
        blocked = False
        if j < n - 1:
            d = _DIR_OF[px[j + 1] - px[j] + 1, py[j + 1] - py[j] + 1]
            dp = (d + 2) % 6 if st[j] > 0 else (d + 4) % 6
            dlx = _DX[dp]
            dly = _DY[dp]
            if j + 1 <= n - 1 - j:
                for k in range(j + 1):
                    g = (px[k] - dlx + off) * side + (py[k] - dly + off)
                    if gstamp[g] == stamp and gidx[g] > j:
                        blocked = True
                        break
            else:
                for h in range(j + 1, n):
                    g = (px[h] + dlx + off) * side + (py[h] + dly + off)
                    if gstamp[g] == stamp and gidx[g] <= j:
                        blocked = True
                        break

        if blocked:
            if last_blocked[j] != version:
                last_blocked[j] = version
                nblocked += 1
                if nblocked == m:
                    return OUTCOME_BLOCKED, t_event, steps, stamp
            continue

        st[j] += -1 if st[j] > 0 else 1
        if st[j] == 0:
            s = slot[j]
            last = nz[m - 1]
            nz[s] = last
            slot[last] = s
            slot[j] = -1
            m -= 1
        if j < n - 1:
            for h in range(j + 1, n):
                g = (px[h] + off) * side + (py[h] + off)
                gstamp[g] = 0
            for h in range(j + 1, n):
                px[h] += dlx
                py[h] += dly
                g = (px[h] + off) * side + (py[h] + off)
                gstamp[g] = stamp
                gidx[g] = h
        version += 1
        nblocked = 0
        t_event = t
        if record:
            moves[steps] = j
            times[steps] = t
            safter[steps] = st[j]
        steps += 1

    return OUTCOME_FINAL, t_event, steps, stamp


@njit(cache=True, nogil=True)
def run_trials(s0, px0, py0, seeds, out_time, out_steps, out_outcome):
    """Independent trajectories, one per seed, filling the output slots."""
    n = s0.shape[0]
    side = 2 * n + 3
    # int32 suffices: stamps stay below the trial count, indices below n
    gstamp = np.zeros(side * side, np.int32)
    gidx = np.zeros(side * side, np.int32)
    st = np.empty(n, np.int64)
    px = np.empty(n, np.int64)
    py = np.empty(n, np.int64)
    nothing_i = np.empty(0, np.int64)
    nothing_f = np.empty(0, np.float64)
    stamp = 0
    for q in range(seeds.shape[0]):
        st[:] = s0
        px[:] = px0
        py[:] = py0
        outcome, tt, steps, stamp = run_chain(
            st, px, py, seeds[q], False, nothing_i, nothing_f, nothing_i, gstamp, gidx, stamp
        )
        out_time[q] = tt
        out_steps[q] = steps
        out_outcome[q] = outcome


@njit(cache=True, nogil=True)
def run_logged(s0, px0, py0, seed, moves, times, safter):
    n = s0.shape[0]
    side = 2 * n + 3
    gstamp = np.zeros(side * side, np.int32)
    gidx = np.zeros(side * side, np.int32)
    st = s0.copy()
    px = px0.copy()
    py = py0.copy()
    outcome, tt, steps, _ = run_chain(
        st, px, py, seed, True, moves, times, safter, gstamp, gidx, 0
    )
    return outcome, tt, steps


@njit(cache=True, nogil=True)
def replay_fence(s0, px0, py0, moves, anchor, ax, ay, fence_y0, fence_x):
    """Replay a logged move list, checking monomers >= anchor stay east of a fence.

    The fence gives, per grid row from ``fence_y0`` upward, the leftmost
    column still on the allowed side, extended to infinity along y at both
    ends.  Positions are checked in the frame that pins monomer ``anchor``
    to (ax, ay).  A move of a monomer below ``anchor`` translates the
    whole suffix rigidly and cannot change positions in that frame.
    Returns the number of moves applied when a violation first appears
    (0 means the initial configuration violates), or -1 if none does.
    """
    n = s0.shape[0]
    st = s0.copy()
    px = px0.copy()
    py = py0.copy()
    rows = fence_x.shape[0]

    for j in range(anchor, n):
        fx = px[j] - px[anchor] + ax
        fy = py[j] - py[anchor] + ay
        r = fy - fence_y0
        if r < 0:
            r = 0
        if r >= rows:
            r = rows - 1
        if fx < fence_x[r]:
            return 0
    for step in range(moves.shape[0]):
        j = moves[step]
        if j < n - 1:
            d = _DIR_OF[px[j + 1] - px[j] + 1, py[j + 1] - py[j] + 1]
            dp = (d + 2) % 6 if st[j] > 0 else (d + 4) % 6
            dlx = _DX[dp]
            dly = _DY[dp]
            for h in range(j + 1, n):
                px[h] += dlx
                py[h] += dly
        st[j] += -1 if st[j] > 0 else 1
        if j >= anchor:
            for h in range(j + 1, n):
                fx = px[h] - px[anchor] + ax
                fy = py[h] - py[anchor] + ay
                r = fy - fence_y0
                if r < 0:
                    r = 0
                if r >= rows:
                    r = rows - 1
                if fx < fence_x[r]:
                    return step + 1
    return -1
