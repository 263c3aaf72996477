import numpy as np

from chiraltor import oracle
from chiraltor.cochain import CohomologyFrame


def float_frame_from_exact(c, exact_frame):
    """Exact cohomology frame converted losslessly to a floating frame.

    Used whenever the floating engine and the exact oracle must agree on
    frame-covariant quantities.
    """
    reps = []
    for j in range(c.d + 1):
        r = exact_frame.reps[j]
        if oracle.qshape(r)[0]:
            reps.append(oracle.qto_array(r))
        else:
            reps.append(np.zeros((c.dims[j], exact_frame.betti[j]), dtype=complex))
    return CohomologyFrame(tuple(reps), tuple(exact_frame.betti))
