"""Pure-Python kernels for simulation, planning, and trajectory scoring.

This module is the portable twin of the compiled ``_kernels`` extension.
Both expose the same functions with the same semantics; the expressions
here are written in exactly the order the C code evaluates them so that
the two backends agree bitwise (the extension is compiled with FP
contraction disabled for the same reason).

Conventions shared by every function:

* a fluent vector is a 7-tuple ``(mass_cart, mass_pole, length_pole,
  force_mag, gravity, angle_limit, x_limit)``
* a state is the 4-tuple ``(x, x_dot, theta, theta_dot)``
* actions are ints, 0 = push left, 1 = push right
* deviation weights ``w0..w3`` follow the state component order
"""

import math

BACKEND_NAME = "python"

# envelope for limit-free simulation; generous enough that any state out
# here scores as wildly inconsistent long before integration stops
DIVERGENCE_LIMIT = 1e9


def derivatives(mass_cart, mass_pole, length_pole, gravity,
                theta, theta_dot, force):
    """Cart and pole accelerations for one applied force."""
    sin_t = math.sin(theta)
    cos_t = math.cos(theta)
    total_mass = mass_cart + mass_pole
    pml = mass_pole * length_pole
    temp = (force + pml * theta_dot * theta_dot * sin_t) / total_mass
    theta_acc = (gravity * sin_t - cos_t * temp) / (
        length_pole * (4.0 / 3.0 - mass_pole * cos_t * cos_t / total_mass)
    )
    x_acc = temp - pml * theta_acc * cos_t / total_mass
    return x_acc, theta_acc


def euler_step(mass_cart, mass_pole, length_pole, gravity,
               x, x_dot, theta, theta_dot, force, dt):
    """One explicit-Euler step; positions advance with pre-update velocities."""
    x_acc, theta_acc = derivatives(mass_cart, mass_pole, length_pole, gravity,
                                   theta, theta_dot, force)
    return (
        x + dt * x_dot,
        x_dot + dt * x_acc,
        theta + dt * theta_dot,
        theta_dot + dt * theta_acc,
    )


def out_of_limits(x, theta, angle_limit, x_limit):
    """Strict limit exceedance; exactly-on-boundary states are safe."""
    return abs(theta) > angle_limit or abs(x) > x_limit


def _diverged(x, x_dot, theta, theta_dot):
    return (abs(x) > DIVERGENCE_LIMIT or abs(x_dot) > DIVERGENCE_LIMIT or
            abs(theta) > DIVERGENCE_LIMIT or abs(theta_dot) > DIVERGENCE_LIMIT)


def simulate(fluents, x, x_dot, theta, theta_dot, actions, dt,
             respect_limits=True):
    """Roll a sequence of actions forward, stopping at the first failed state.

    Returns the visited states as 4-tuples, starting with the initial
    state.  The returned list ends with the first out-of-limits state if
    one is reached before the actions run out.  With ``respect_limits``
    false the angle and track limits are ignored and integration runs the
    full action sequence, stopping early only if the state leaves a wide
    divergence envelope.
    """
    mass_cart, mass_pole, length_pole, force_mag, gravity, angle_limit, x_limit = fluents
    out = [(x, x_dot, theta, theta_dot)]
    for action in actions:
        if respect_limits:
            if out_of_limits(x, theta, angle_limit, x_limit):
                break
        elif _diverged(x, x_dot, theta, theta_dot):
            break
        force = force_mag if action else -force_mag
        x, x_dot, theta, theta_dot = euler_step(
            mass_cart, mass_pole, length_pole, gravity,
            x, x_dot, theta, theta_dot, force, dt)
        out.append((x, x_dot, theta, theta_dot))
    return out


def discounted_deviation(expected, observed, gamma, w0, w1, w2, w3):
    """Discounted sum of weighted distances between two state sequences.

    ``expected`` and ``observed`` are flat float sequences (4 values per
    state); the comparison runs over the shorter of the two.
    """
    m = min(len(expected), len(observed)) // 4
    score = 0.0
    disc = 1.0
    for i in range(m):
        if i:
            disc *= gamma
        j = 4 * i
        d0 = observed[j] - expected[j]
        d1 = observed[j + 1] - expected[j + 1]
        d2 = observed[j + 2] - expected[j + 2]
        d3 = observed[j + 3] - expected[j + 3]
        dist = math.sqrt(w0 * d0 * d0 + w1 * d1 * d1 +
                         w2 * d2 * d2 + w3 * d3 * d3)
        score += disc * dist
    return score


def trajectory_score(fluents, x, x_dot, theta, theta_dot, actions,
                     observed, dt, gamma, w0, w1, w2, w3,
                     respect_limits=True):
    """Fused simulate + discounted deviation against an observed sequence.

    Equivalent to ``discounted_deviation(flatten(simulate(...)), observed,
    ...)`` but without materialising the predicted states; the operation
    order matches exactly, so the results are bitwise equal.
    ``respect_limits`` selects the same stop rule as in ``simulate``.
    """
    mass_cart, mass_pole, length_pole, force_mag, gravity, angle_limit, x_limit = fluents
    n_obs = len(observed) // 4
    if n_obs == 0:
        return 0.0
    d0 = observed[0] - x
    d1 = observed[1] - x_dot
    d2 = observed[2] - theta
    d3 = observed[3] - theta_dot
    score = math.sqrt(w0 * d0 * d0 + w1 * d1 * d1 +
                      w2 * d2 * d2 + w3 * d3 * d3)
    disc = 1.0
    i = 1
    for action in actions:
        if i >= n_obs:
            break
        if respect_limits:
            if out_of_limits(x, theta, angle_limit, x_limit):
                break
        elif _diverged(x, x_dot, theta, theta_dot):
            break
        force = force_mag if action else -force_mag
        x, x_dot, theta, theta_dot = euler_step(
            mass_cart, mass_pole, length_pole, gravity,
            x, x_dot, theta, theta_dot, force, dt)
        disc *= gamma
        j = 4 * i
        d0 = observed[j] - x
        d1 = observed[j + 1] - x_dot
        d2 = observed[j + 2] - theta
        d3 = observed[j + 3] - theta_dot
        dist = math.sqrt(w0 * d0 * d0 + w1 * d1 * d1 +
                         w2 * d2 * d2 + w3 * d3 * d3)
        score += disc * dist
        i += 1
    return score


def _partial_cost(x, x_dot, theta, theta_dot,
                  w_theta, w_theta_dot, w_x, w_x_dot,
                  terminal_penalty, angle_limit, x_limit):
    cost = (w_theta * theta * theta + w_theta_dot * theta_dot * theta_dot +
            w_x * x * x + w_x_dot * x_dot * x_dot)
    if out_of_limits(x, theta, angle_limit, x_limit):
        cost += terminal_penalty
    return cost


def beam_plan(fluents, x, x_dot, theta, theta_dot, dt, depth, width,
              w_theta, w_theta_dot, w_x, w_x_dot, terminal_penalty):
    """Beam search over left/right action sequences of a fixed depth.

    Partial sequences are ranked by the accumulated per-state cost of the
    states they visit (the root state is a shared constant and is not
    counted).  The total order used everywhere is (cost, action sequence)
    with left < right, so ties resolve to the lexicographically smallest
    sequence.  Returns ``(actions, cost)`` for the best full-depth
    sequence, or ``None`` when every first step already fails the limits.
    """
    mass_cart, mass_pole, length_pole, force_mag, gravity, angle_limit, x_limit = fluents
    beam = [(0.0, (), (x, x_dot, theta, theta_dot))]
    for level in range(depth):
        children = []
        for cost, seq, state in beam:
            sx, sx_dot, stheta, stheta_dot = state
            for action in (0, 1):
                force = force_mag if action else -force_mag
                child = euler_step(mass_cart, mass_pole, length_pole, gravity,
                                   sx, sx_dot, stheta, stheta_dot, force, dt)
                child_cost = cost + _partial_cost(
                    child[0], child[1], child[2], child[3],
                    w_theta, w_theta_dot, w_x, w_x_dot,
                    terminal_penalty, angle_limit, x_limit)
                children.append((child_cost, seq + (action,), child))
        if level == 0 and all(
            out_of_limits(c[2][0], c[2][2], angle_limit, x_limit)
            for c in children
        ):
            return None
        children.sort(key=lambda c: (c[0], c[1]))
        beam = children[:width]
    best_cost, best_seq, _ = beam[0]
    return list(best_seq), best_cost
