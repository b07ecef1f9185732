/** The canonical 24-joint skeleton, mirrored from the backend. */

export const JOINT_NAMES = [
  "pelvis",
  "left_hip",
  "right_hip",
  "spine1",
  "left_knee",
  "right_knee",
  "spine2",
  "left_ankle",
  "right_ankle",
  "spine3",
  "left_foot",
  "right_foot",
  "neck",
  "left_collar",
  "right_collar",
  "head",
  "left_shoulder",
  "right_shoulder",
  "left_elbow",
  "right_elbow",
  "left_wrist",
  "right_wrist",
  "left_hand",
  "right_hand",
] as const;

// parent[i] is the parent joint index; the pelvis root has -1.
export const PARENT_INDICES = [
  -1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21,
] as const;

/** 23 bones as [parentIndex, childIndex] pairs, in child order. */
export const BONES: Array<[number, number]> = PARENT_INDICES.flatMap((p, child) =>
  p >= 0 ? [[p, child] as [number, number]] : [],
);

export function jointIndex(name: string): number {
  const i = (JOINT_NAMES as readonly string[]).indexOf(name);
  if (i < 0) throw new Error(`unknown joint: ${name}`);
  return i;
}
