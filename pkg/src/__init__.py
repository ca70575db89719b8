# vortexff：涡旋光子原子形状因子计算引擎
