"""
可复现随机数生成器 (SplitMix64)

更新规则: 第 t 次输出 (t 从 1 开始) 为 mix(state + t·GAMMA) (模 2^64),
mix 为 SplitMix64 的三段异或移位乘法。相同种子在任何平台上输出相同。
"""
from typing import List, Optional

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _MUL1
    z = (z ^ (z >> _S27)) * _MUL2
    return z ^ (z >> _S31)


class SeededRng:
    """单一所有者的随机流, 跨线程只能通过 rng_split 派生"""

    def __init__(self, seed: int = 0):
        self._state = int(seed) & MASK64

    @property
    def state(self) -> int:
        return self._state

    def next_u64(self, size: int = 1) -> np.ndarray:
        """下 size 个 64 位无符号整数"""
        steps = np.arange(1, size + 1, dtype=np.uint64)
        z = np.uint64(self._state) + steps * np.uint64(GAMMA)
        self._state = (self._state + size * GAMMA) & MASK64
        return _mix(z)

    def random(self, size: Optional[int] = None):
        """[0, 1) 上的 53 位均匀数"""
        n = 1 if size is None else size
        u = (self.next_u64(n) >> _S11).astype(np.float64) * (1.0 / (1 << 53))
        return float(u[0]) if size is None else u

    def uniform(self, low: float, high: float, size: Optional[int] = None):
        u = self.random(size)
        return low + (high - low) * u

    def integers(self, n: int, size: Optional[int] = None):
        """0..n-1 上的均匀整数"""
        u = self.random(1 if size is None else size)
        out = np.minimum(np.floor(u * n).astype(np.int64), n - 1)
        return int(out[0]) if size is None else out

    def permutation(self, n: int) -> np.ndarray:
        return np.argsort(self.random(n), kind="stable").astype(np.int64)

    def choice(self, n: int, size: int) -> np.ndarray:
        """不放回抽取 size 个 0..n-1 的整数"""
        return self.permutation(n)[:size]

    def weighted_index(self, weights: np.ndarray) -> int:
        """按非负权重比例抽取一个索引"""
        cum = np.cumsum(weights)
        u = self.random() * cum[-1]
        idx = int(np.searchsorted(cum, u, side="right"))
        if idx >= len(weights):
            idx = int(np.flatnonzero(np.asarray(weights) > 0)[-1])
        return idx


def rng_split(seed: int, k: int) -> List[int]:
    """派生 k 个子种子, 第 i 个只依赖 (seed, i)"""
    if k < 1:
        return []
    return [int(v) for v in SeededRng(seed).next_u64(k)]
