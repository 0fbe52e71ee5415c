# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for simulation, planning, and trajectory scoring.

Twin of ``_reference``: same functions, same argument conventions, and
the same floating-point operation order, so both backends return bitwise
identical results.  The build disables FP contraction and sin/cos
merging, both of which would change results in the last ulp.
"""

from libc.math cimport sin, cos, sqrt, fabs
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memcmp

BACKEND_NAME = "compiled"

# envelope for limit-free simulation; generous enough that any state out
# here scores as wildly inconsistent long before integration stops
DIVERGENCE_LIMIT = 1e9
cdef double _DIVERGENCE_LIMIT = 1e9


cdef inline void _derivatives(double mass_cart, double mass_pole,
                              double length_pole, double gravity,
                              double theta, double theta_dot, double force,
                              double* x_acc, double* theta_acc) noexcept nogil:
    cdef double sin_t = sin(theta)
    cdef double cos_t = cos(theta)
    cdef double total_mass = mass_cart + mass_pole
    cdef double pml = mass_pole * length_pole
    cdef double temp = (force + pml * theta_dot * theta_dot * sin_t) / total_mass
    theta_acc[0] = (gravity * sin_t - cos_t * temp) / (
        length_pole * (4.0 / 3.0 - mass_pole * cos_t * cos_t / total_mass)
    )
    x_acc[0] = temp - pml * theta_acc[0] * cos_t / total_mass


cdef inline void _euler_step(double mass_cart, double mass_pole,
                             double length_pole, double gravity,
                             double* s, double force, double dt) noexcept nogil:
    # s is the 4-vector (x, x_dot, theta, theta_dot), updated in place.
    cdef double x_acc, theta_acc
    _derivatives(mass_cart, mass_pole, length_pole, gravity,
                 s[2], s[3], force, &x_acc, &theta_acc)
    cdef double x = s[0] + dt * s[1]
    cdef double x_dot = s[1] + dt * x_acc
    cdef double theta = s[2] + dt * s[3]
    cdef double theta_dot = s[3] + dt * theta_acc
    s[0] = x
    s[1] = x_dot
    s[2] = theta
    s[3] = theta_dot


cdef inline bint _out_of_limits(double x, double theta,
                                double angle_limit, double x_limit) noexcept nogil:
    return fabs(theta) > angle_limit or fabs(x) > x_limit


cdef inline bint _diverged(double x, double x_dot, double theta,
                           double theta_dot) noexcept nogil:
    return (fabs(x) > _DIVERGENCE_LIMIT or fabs(x_dot) > _DIVERGENCE_LIMIT or
            fabs(theta) > _DIVERGENCE_LIMIT or
            fabs(theta_dot) > _DIVERGENCE_LIMIT)


def derivatives(double mass_cart, double mass_pole, double length_pole,
                double gravity, double theta, double theta_dot, double force):
    """Cart and pole accelerations for one applied force."""
    cdef double x_acc, theta_acc
    _derivatives(mass_cart, mass_pole, length_pole, gravity,
                 theta, theta_dot, force, &x_acc, &theta_acc)
    return x_acc, theta_acc


def euler_step(double mass_cart, double mass_pole, double length_pole,
               double gravity, double x, double x_dot, double theta,
               double theta_dot, double force, double dt):
    """One explicit-Euler step; positions advance with pre-update velocities."""
    cdef double s[4]
    s[0] = x
    s[1] = x_dot
    s[2] = theta
    s[3] = theta_dot
    _euler_step(mass_cart, mass_pole, length_pole, gravity, s, force, dt)
    return s[0], s[1], s[2], s[3]


def out_of_limits(double x, double theta, double angle_limit, double x_limit):
    """Strict limit exceedance; exactly-on-boundary states are safe."""
    return bool(_out_of_limits(x, theta, angle_limit, x_limit))


def simulate(fluents, double x, double x_dot, double theta, double theta_dot,
             bytes actions, double dt, bint respect_limits=True):
    """Roll a sequence of actions forward, stopping at the first failed state.

    With ``respect_limits`` false the angle and track limits are ignored
    and integration stops early only at a wide divergence envelope.
    """
    cdef double mass_cart = fluents[0]
    cdef double mass_pole = fluents[1]
    cdef double length_pole = fluents[2]
    cdef double force_mag = fluents[3]
    cdef double gravity = fluents[4]
    cdef double angle_limit = fluents[5]
    cdef double x_limit = fluents[6]
    cdef const unsigned char* act = actions
    cdef Py_ssize_t n = len(actions)
    cdef Py_ssize_t k
    cdef double s[4]
    s[0] = x
    s[1] = x_dot
    s[2] = theta
    s[3] = theta_dot
    out = [(x, x_dot, theta, theta_dot)]
    for k in range(n):
        if respect_limits:
            if _out_of_limits(s[0], s[2], angle_limit, x_limit):
                break
        elif _diverged(s[0], s[1], s[2], s[3]):
            break
        _euler_step(mass_cart, mass_pole, length_pole, gravity, s,
                    force_mag if act[k] else -force_mag, dt)
        out.append((s[0], s[1], s[2], s[3]))
    return out


def discounted_deviation(const double[::1] expected, const double[::1] observed,
                         double gamma, double w0, double w1, double w2, double w3):
    """Discounted sum of weighted distances between two flat state sequences."""
    cdef Py_ssize_t ne = expected.shape[0] // 4
    cdef Py_ssize_t no = observed.shape[0] // 4
    cdef Py_ssize_t m = ne if ne < no else no
    cdef double score = 0.0
    cdef double disc = 1.0
    cdef double d0, d1, d2, d3
    cdef Py_ssize_t i, j
    for i in range(m):
        if i:
            disc *= gamma
        j = 4 * i
        d0 = observed[j] - expected[j]
        d1 = observed[j + 1] - expected[j + 1]
        d2 = observed[j + 2] - expected[j + 2]
        d3 = observed[j + 3] - expected[j + 3]
        score += disc * sqrt(w0 * d0 * d0 + w1 * d1 * d1 +
                             w2 * d2 * d2 + w3 * d3 * d3)
    return score


def trajectory_score(fluents, double x, double x_dot, double theta,
                     double theta_dot, bytes actions,
                     const double[::1] observed, double dt, double gamma,
                     double w0, double w1, double w2, double w3,
                     bint respect_limits=True):
    """Fused simulate + discounted deviation against an observed sequence.

    ``respect_limits`` selects the same stop rule as in ``simulate``.
    """
    cdef double mass_cart = fluents[0]
    cdef double mass_pole = fluents[1]
    cdef double length_pole = fluents[2]
    cdef double force_mag = fluents[3]
    cdef double gravity = fluents[4]
    cdef double angle_limit = fluents[5]
    cdef double x_limit = fluents[6]
    cdef const unsigned char* act = actions
    cdef Py_ssize_t n_act = len(actions)
    cdef Py_ssize_t n_obs = observed.shape[0] // 4
    if n_obs == 0:
        return 0.0
    cdef double s[4]
    s[0] = x
    s[1] = x_dot
    s[2] = theta
    s[3] = theta_dot
    cdef double d0 = observed[0] - s[0]
    cdef double d1 = observed[1] - s[1]
    cdef double d2 = observed[2] - s[2]
    cdef double d3 = observed[3] - s[3]
    cdef double score = sqrt(w0 * d0 * d0 + w1 * d1 * d1 +
                             w2 * d2 * d2 + w3 * d3 * d3)
    cdef double disc = 1.0
    cdef Py_ssize_t i = 1
    cdef Py_ssize_t k, j
    for k in range(n_act):
        if i >= n_obs:
            break
        if respect_limits:
            if _out_of_limits(s[0], s[2], angle_limit, x_limit):
                break
        elif _diverged(s[0], s[1], s[2], s[3]):
            break
        _euler_step(mass_cart, mass_pole, length_pole, gravity, s,
                    force_mag if act[k] else -force_mag, dt)
        disc *= gamma
        j = 4 * i
        d0 = observed[j] - s[0]
        d1 = observed[j + 1] - s[1]
        d2 = observed[j + 2] - s[2]
        d3 = observed[j + 3] - s[3]
        score += disc * sqrt(w0 * d0 * d0 + w1 * d1 * d1 +
                             w2 * d2 * d2 + w3 * d3 * d3)
        i += 1
    return score


cdef inline bint _child_less(Py_ssize_t a, Py_ssize_t b, double* costs,
                             unsigned char* seqs, Py_ssize_t stride,
                             Py_ssize_t seq_len) noexcept nogil:
    # Total order (cost, action sequence); left (0) sorts before right (1).
    if costs[a] < costs[b]:
        return True
    if costs[a] > costs[b]:
        return False
    return memcmp(seqs + a * stride, seqs + b * stride, seq_len) < 0


cdef void _sift_down(Py_ssize_t* heap, Py_ssize_t size, Py_ssize_t root,
                     double* costs, unsigned char* seqs, Py_ssize_t stride,
                     Py_ssize_t seq_len) noexcept nogil:
    # Max-heap on the (cost, sequence) order: the worst kept child on top.
    cdef Py_ssize_t child, swap, tmp
    while True:
        child = 2 * root + 1
        if child >= size:
            return
        swap = root
        if _child_less(heap[swap], heap[child], costs, seqs, stride, seq_len):
            swap = child
        if child + 1 < size and _child_less(heap[swap], heap[child + 1],
                                            costs, seqs, stride, seq_len):
            swap = child + 1
        if swap == root:
            return
        tmp = heap[root]
        heap[root] = heap[swap]
        heap[swap] = tmp
        root = swap


def beam_plan(fluents, double x, double x_dot, double theta, double theta_dot,
              double dt, Py_ssize_t depth, Py_ssize_t width,
              double w_theta, double w_theta_dot, double w_x, double w_x_dot,
              double terminal_penalty):
    """Beam search over left/right action sequences of a fixed depth.

    Same contract as the reference implementation: partial sequences are
    ranked by accumulated state cost under the total order
    (cost, sequence), and the best full-depth sequence is returned as
    ``(actions, cost)``; ``None`` when every first step already fails the
    limits.
    """
    cdef double mass_cart = fluents[0]
    cdef double mass_pole = fluents[1]
    cdef double length_pole = fluents[2]
    cdef double force_mag = fluents[3]
    cdef double gravity = fluents[4]
    cdef double angle_limit = fluents[5]
    cdef double x_limit = fluents[6]

    cdef Py_ssize_t max_children = 2 * width
    cdef double* beam_states = <double*> malloc(width * 4 * sizeof(double))
    cdef double* beam_costs = <double*> malloc(width * sizeof(double))
    cdef unsigned char* beam_seqs = <unsigned char*> malloc(width * depth)
    cdef double* child_states = <double*> malloc(max_children * 4 * sizeof(double))
    cdef double* child_costs = <double*> malloc(max_children * sizeof(double))
    cdef unsigned char* child_seqs = <unsigned char*> malloc(max_children * depth)
    cdef Py_ssize_t* heap = <Py_ssize_t*> malloc(width * sizeof(Py_ssize_t))
    if (beam_states == NULL or beam_costs == NULL or beam_seqs == NULL or
            child_states == NULL or child_costs == NULL or
            child_seqs == NULL or heap == NULL):
        free(beam_states); free(beam_costs); free(beam_seqs)
        free(child_states); free(child_costs); free(child_seqs); free(heap)
        raise MemoryError()

    cdef Py_ssize_t beam_size = 1
    cdef Py_ssize_t level, b, action, n_children, idx, i, keep, best
    cdef double cost
    cdef double* s
    cdef bint all_failed
    beam_states[0] = x
    beam_states[1] = x_dot
    beam_states[2] = theta
    beam_states[3] = theta_dot
    beam_costs[0] = 0.0

    try:
        for level in range(depth):
            n_children = 0
            all_failed = True
            for b in range(beam_size):
                for action in range(2):
                    idx = n_children
                    s = child_states + 4 * idx
                    memcpy(s, beam_states + 4 * b, 4 * sizeof(double))
                    _euler_step(mass_cart, mass_pole, length_pole, gravity, s,
                                force_mag if action else -force_mag, dt)
                    # Same addition order as the reference backend:
                    # state cost (plus penalty) first, then the parent cost.
                    cost = (w_theta * s[2] * s[2] + w_theta_dot * s[3] * s[3] +
                            w_x * s[0] * s[0] + w_x_dot * s[1] * s[1])
                    if _out_of_limits(s[0], s[2], angle_limit, x_limit):
                        cost += terminal_penalty
                    else:
                        all_failed = False
                    child_costs[idx] = beam_costs[b] + cost
                    memcpy(child_seqs + idx * depth, beam_seqs + b * depth, level)
                    child_seqs[idx * depth + level] = <unsigned char> action
                    n_children += 1
            if level == 0 and all_failed:
                return None
            if n_children <= width:
                keep = n_children
                for i in range(keep):
                    heap[i] = i
            else:
                keep = width
                for i in range(keep):
                    heap[i] = i
                for i in range(keep // 2 - 1, -1, -1):
                    _sift_down(heap, keep, i, child_costs, child_seqs,
                               depth, level + 1)
                for idx in range(keep, n_children):
                    if _child_less(idx, heap[0], child_costs, child_seqs,
                                   depth, level + 1):
                        heap[0] = idx
                        _sift_down(heap, keep, 0, child_costs, child_seqs,
                                   depth, level + 1)
            for i in range(keep):
                idx = heap[i]
                memcpy(beam_states + 4 * i, child_states + 4 * idx,
                       4 * sizeof(double))
                beam_costs[i] = child_costs[idx]
                memcpy(beam_seqs + i * depth, child_seqs + idx * depth, depth)
            beam_size = keep

        best = 0
        for i in range(1, beam_size):
            if _child_less(i, best, beam_costs, beam_seqs, depth, depth):
                best = i
        actions_out = [0] * depth
        for i in range(depth):
            actions_out[i] = beam_seqs[best * depth + i]
        return actions_out, beam_costs[best]
    finally:
        free(beam_states)
        free(beam_costs)
        free(beam_seqs)
        free(child_states)
        free(child_costs)
        free(child_seqs)
        free(heap)
