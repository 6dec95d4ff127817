"""Independent reference implementations used to verify the package.

Everything here is deliberately written in plain Python (loops, fsum,
cofactor inverses) so it shares no code path with the numpy-backed
implementations it checks.
"""

import math


def cos_pure(u, v):
    dot = math.fsum(a * b for a, b in zip(u, v))
    nu = math.sqrt(math.fsum(a * a for a in u))
    nv = math.sqrt(math.fsum(b * b for b in v))
    return max(-1.0, min(1.0, dot / (nu * nv)))


def det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def inv3(m):
    d = det3(m)
    cof = [
        [
            (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d,
        ],
        [
            (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d,
        ],
        [
            (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d,
        ],
    ]
    return cof


def gauss_pdf3(x, mean, cov):
    d = [x[i] - mean[i] for i in range(3)]
    inv = inv3(cov)
    maha = math.fsum(d[i] * inv[i][j] * d[j] for i in range(3) for j in range(3))
    norm = 1.0 / math.sqrt(((2.0 * math.pi) ** 3) * det3(cov))
    return norm * math.exp(-0.5 * maha)


def posterior_pure(weights, means, covs, point):
    dens = [w * gauss_pdf3(point, m, c) for w, m, c in zip(weights, means, covs)]
    total = math.fsum(dens)
    return [d / total for d in dens]


def project_pure(mean, components, v):
    centered = [v[i] - mean[i] for i in range(len(v))]
    return [
        math.fsum(row[i] * centered[i] for i in range(len(centered)))
        for row in components
    ]


def norm_pure(s, mu, sigma, sigma_c=3.0):
    z = (s - mu) / sigma
    val = (z + sigma_c) / (2.0 * sigma_c)
    return max(0.0, min(1.0, val))


def calibrated_pure(s, p, mu, sigma, valid, sigma_c=3.0):
    total = 0.0
    for i in range(len(p)):
        if not valid[i]:
            if p[i] > 1e-6:
                raise ValueError(f"cluster {i} invalid with mass {p[i]}")
            continue
        total += p[i] * norm_pure(s, mu[i], sigma[i], sigma_c)
    return max(0.0, min(1.0, total))


def brute_force_expand(
    candidates,
    lexicon_flags,   # word -> dict emotion -> 0/1
    vectors,         # word -> list of floats
    pca_mean,
    pca_components,
    weights,
    means,
    covs,
    mu,
    sigma,
    valid,
    emotions,
    theta,
):
    """Exhaustive (candidate, lexicon-word, emotion) enumeration.

    Returns the set of (candidate, emotion, nearest) triples plus a dict
    of their calibrated scores.
    """
    assignments = set()
    scores = {}
    seed_words = sorted(lexicon_flags)
    for cand in sorted(candidates):
        if cand in lexicon_flags or cand not in vectors:
            continue
        cvec = vectors[cand]
        point = project_pure(pca_mean, pca_components, cvec)
        p = posterior_pure(weights, means, covs, point)
        for emotion in emotions:
            best_word = None
            best_s = None
            for w in seed_words:
                if lexicon_flags[w].get(emotion, 0) != 1 or w not in vectors:
                    continue
                s_raw = cos_pure(cvec, vectors[w])
                s_fin = calibrated_pure(s_raw, p, mu, sigma, valid)
                if best_s is None or s_fin > best_s:
                    best_word, best_s = w, s_fin
            if best_word is not None and best_s > theta:
                assignments.add((cand, emotion, best_word))
                scores[(cand, emotion, best_word)] = best_s
    return assignments, scores


def avg_hamming_pairs(patterns):
    """Mean pairwise Hamming distance by explicit O(W^2) enumeration."""
    n = len(patterns)
    if n < 2:
        return 0.0
    total = 0
    pairs = 0
    for i in range(n):
        for j in range(i + 1, n):
            total += sum(a != b for a, b in zip(patterns[i], patterns[j]))
            pairs += 1
    return total / pairs


def entropy_bits_pure(counts):
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c:
            q = c / total
            h -= q * math.log2(q)
    return h
