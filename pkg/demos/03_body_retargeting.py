"""Fit the reference dancer's motion onto a differently-proportioned body.

Run:  python3 demos/03_body_retargeting.py
"""

import numpy as np

from dancekit import (
    CANONICAL_SKELETON,
    PoseFrame,
    calibrate_user,
    compute_retarget,
    limb_lengths,
    retarget_pose,
)

from common import rest_pose

sk = CANONICAL_SKELETON

# The reference body, measured from its first frame.
reference_frame = PoseFrame(t=0.0, positions=rest_pose())
reference = calibrate_user([reference_frame], sk)

# A "learner" with longer arms and shorter legs, standing a meter to the
# side. Calibration would normally see ~30 live webcam frames; the median
# per bone shrugs off estimator spikes.
learner_pos = rest_pose()
arm = {"left_elbow", "right_elbow", "left_wrist", "right_wrist", "left_hand", "right_hand"}
leg = {"left_knee", "right_knee", "left_ankle", "right_ankle", "left_foot", "right_foot"}
scaled = np.empty_like(learner_pos)
for i in sk.topological_order():
    p = int(sk.parent_indices[i])
    if p < 0:
        scaled[i] = learner_pos[i] + np.array([1.0, 0.0, 0.0])
        continue
    name = sk.joints[i]
    factor = 1.25 if name in arm else 0.85 if name in leg else 1.0
    scaled[i] = scaled[p] + factor * (learner_pos[i] - learner_pos[p])

frames = [PoseFrame(t=i / 30.0, positions=scaled + np.random.default_rng(i).normal(scale=0.002, size=(24, 3))) for i in range(30)]
learner = calibrate_user(frames, sk)
print(f"calibrated from {learner.frames_used} frames")

transform = compute_retarget(reference, learner)
print("\nper-bone scale factors (sample):")
for child in ("left_wrist", "left_knee", "spine2", "head"):
    print(f"  {child:12s} {transform.bone_scale[child]:.3f}")
print(f"root offset: {np.round(transform.root_offset, 3)}")

# Re-pose the reference frame onto the learner's body: directions are kept,
# lengths become the learner's.
fitted = retarget_pose(reference_frame, transform, sk)
before = limb_lengths(reference_frame, sk)
after = limb_lengths(fitted, sk)
print("\nbone lengths (m):   reference   fitted   learner")
for child in ("left_wrist", "left_knee", "spine2"):
    print(f"  {child:12s}      {before[child]:.3f}     {after[child]:.3f}    {learner.bone_lengths[child]:.3f}")
