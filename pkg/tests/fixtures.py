"""Reference matrices transcribed verbatim: SO(5) at S = 1 and SO(4) at S = 3/2."""

import numpy as np

r2 = np.sqrt(2)
r3 = np.sqrt(3)
i = 1j

SO5_S1_GAMMAS = np.array(
    [
        [
            [0, 0, 0, 0, r2 * i, 0, 0, 0, 0, 0],
            [0, 0, 0, i, 0, 0, i, 0, 0, 0],
            [0, 0, 0, 0, 0, r2 * i, 0, 0, 0, 0],
            [0, -i, 0, 0, 0, 0, 0, 0, i, 0],
            [-r2 * i, 0, 0, 0, 0, 0, 0, 0, 0, r2 * i],
            [0, 0, -r2 * i, 0, 0, 0, 0, r2 * i, 0, 0],
            [0, -i, 0, 0, 0, 0, 0, 0, i, 0],
            [0, 0, 0, 0, 0, -r2 * i, 0, 0, 0, 0],
            [0, 0, 0, -i, 0, 0, -i, 0, 0, 0],
            [0, 0, 0, 0, -r2 * i, 0, 0, 0, 0, 0],
        ],
        [
            [0, 0, 0, 0, r2, 0, 0, 0, 0, 0],
            [0, 0, 0, -1, 0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 0, -r2, 0, 0, 0, 0],
            [0, -1, 0, 0, 0, 0, 0, 0, 1, 0],
            [r2, 0, 0, 0, 0, 0, 0, 0, 0, r2],
            [0, 0, -r2, 0, 0, 0, 0, -r2, 0, 0],
            [0, 1, 0, 0, 0, 0, 0, 0, -1, 0],
            [0, 0, 0, 0, 0, -r2, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0, -1, 0, 0, 0],
            [0, 0, 0, 0, r2, 0, 0, 0, 0, 0],
        ],
        [
            [0, 0, 0, r2 * i, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, -i, i, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, -r2 * i, 0, 0, 0],
            [-r2 * i, 0, 0, 0, 0, 0, 0, r2 * i, 0, 0],
            [0, i, 0, 0, 0, 0, 0, 0, i, 0],
            [0, -i, 0, 0, 0, 0, 0, 0, -i, 0],
            [0, 0, r2 * i, 0, 0, 0, 0, 0, 0, -r2 * i],
            [0, 0, 0, -r2 * i, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, -i, i, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, r2 * i, 0, 0, 0],
        ],
        [
            [0, 0, 0, r2, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, r2, 0, 0, 0],
            [r2, 0, 0, 0, 0, 0, 0, r2, 0, 0],
            [0, 1, 0, 0, 0, 0, 0, 0, 1, 0],
            [0, 1, 0, 0, 0, 0, 0, 0, 1, 0],
            [0, 0, r2, 0, 0, 0, 0, 0, 0, r2],
            [0, 0, 0, r2, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, r2, 0, 0, 0],
        ],
        np.diag([2, 2, 2, 0, 0, 0, 0, -2, -2, -2]),
    ],
    dtype=np.complex128,
)

SO4_S32_Y = np.array(
    [
        [
            [0, r2 * i, 0, 0, 0, 0],
            [0, 0, 2 * i, 0, 0, 0],
            [r2 * i, 0, 0, 0, i, 0],
            [0, i, 0, 0, 0, r2 * i],
            [0, 0, 0, 2 * i, 0, 0],
            [0, 0, 0, 0, r2 * i, 0],
        ],
        [
            [0, r2, 0, 0, 0, 0],
            [0, 0, 2, 0, 0, 0],
            [-r2, 0, 0, 0, 1, 0],
            [0, -1, 0, 0, 0, r2],
            [0, 0, 0, -2, 0, 0],
            [0, 0, 0, 0, -r2, 0],
        ],
        [
            [2 * i, 0, 0, 0, 0, 0],
            [0, r2 * i, 0, 0, 0, 0],
            [0, -i, 0, r2 * i, 0, 0],
            [0, 0, -r2 * i, 0, i, 0],
            [0, 0, 0, 0, -r2 * i, 0],
            [0, 0, 0, 0, 0, -2 * i],
        ],
        [
            [2, 0, 0, 0, 0, 0],
            [0, r2, 0, 0, 0, 0],
            [0, 1, 0, r2, 0, 0],
            [0, 0, r2, 0, 1, 0],
            [0, 0, 0, 0, r2, 0],
            [0, 0, 0, 0, 0, 2],
        ],
    ],
    dtype=np.complex128,
)


def so4_s32_gammas():
    out = np.zeros((4, 12, 12), dtype=np.complex128)
    out[:, :6, 6:] = SO4_S32_Y
    out[:, 6:, :6] = np.conj(np.transpose(SO4_S32_Y, (0, 2, 1)))
    return out


SO4_S32_CHIRALITY = np.diag([1.0] * 6 + [-1.0] * 6).astype(np.complex128)

# columns of the diagonaliser of Gamma_4, ordered by eigenvalue 2 (x4), 1 (x2), -1 (x2), -2 (x4)
SO4_S32_V = (
    np.array(
        [
            [r3, 0, 0, 0, 0, 0, 0, 0, -r3, 0, 0, 0],
            [0, 1, 0, 0, -r2, 0, r2, 0, 0, -1, 0, 0],
            [0, r2, 0, 0, 1, 0, -1, 0, 0, -r2, 0, 0],
            [0, 0, r2, 0, 0, -1, 0, 1, 0, 0, -r2, 0],
            [0, 0, 1, 0, 0, r2, 0, -r2, 0, 0, -1, 0],
            [0, 0, 0, r3, 0, 0, 0, 0, 0, 0, 0, -r3],
            [r3, 0, 0, 0, 0, 0, 0, 0, r3, 0, 0, 0],
            [0, r2, 0, 0, -1, 0, -1, 0, 0, r2, 0, 0],
            [0, 0, 1, 0, 0, -r2, 0, -r2, 0, 0, 1, 0],
            [0, 1, 0, 0, r2, 0, r2, 0, 0, 1, 0, 0],
            [0, 0, r2, 0, 0, 1, 0, 1, 0, 0, r2, 0],
            [0, 0, 0, r3, 0, 0, 0, 0, 0, 0, 0, r3],
        ]
    )
    / np.sqrt(6)
)
