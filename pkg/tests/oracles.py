"""Independent reference implementations used only by the tests."""

import math

import numpy as np


class DirectInterpreter:
    """Evaluates expression source while parsing it; never builds a tree."""

    FUNCS = {"neg": lambda a: -a, "sin": math.sin, "cos": math.cos, "exp": math.exp,
             "log": math.log, "sqrt": math.sqrt, "abs": abs, "tanh": math.tanh}

    def __init__(self, src, x, u, v):
        self.s = src.replace(" ", "")
        self.i = 0
        self.env = {"x": x, "u": u, "v": v}

    def run(self):
        val = self.expr()
        assert self.i == len(self.s), f"trailing input at {self.i}"
        return val

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-") and self.peek():
            op = self.s[self.i]
            self.i += 1
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.factor()
        while self.peek() in ("*", "/") and self.peek():
            op = self.s[self.i]
            self.i += 1
            rhs = self.factor()
            if op == "*":
                val = val * rhs
            else:
                if rhs == 0.0:
                    raise ArithmeticError("division by zero")
                val = val / rhs
        return val

    def factor(self):
        base = self.unary()
        if self.peek() == "^":
            self.i += 1
            e = self.factor()
            return self.power(base, e)
        return base

    @staticmethod
    def power(base, e):
        if e == int(e) and abs(e) <= 64:
            n = int(e)
            if n == 0:
                return 1.0
            r = base
            for _ in range(abs(n) - 1):
                r = r * base
            if n < 0:
                if r == 0.0:
                    raise ArithmeticError("zero to negative power")
                r = 1.0 / r
            return r
        if base < 0 or (base == 0 and e < 0):
            raise ArithmeticError("power domain")
        return math.pow(base, e)

    def unary(self):
        if self.peek() == "-":
            self.i += 1
            return -self.unary()
        return self.atom()

    def atom(self):
        c = self.peek()
        if c == "(":
            self.i += 1
            val = self.expr()
            assert self.s[self.i] == ")"
            self.i += 1
            return val
        j = self.i
        if c.isdigit() or c == ".":
            while j < len(self.s) and (self.s[j].isdigit() or self.s[j] == "."):
                j += 1
            if j < len(self.s) and self.s[j] in "eE":
                j += 1
                if self.s[j] in "+-":
                    j += 1
                while j < len(self.s) and self.s[j].isdigit():
                    j += 1
            tok, self.i = self.s[self.i:j], j
            return float(tok)
        while j < len(self.s) and (self.s[j].isalnum() or self.s[j] == "_"):
            j += 1
        name, self.i = self.s[self.i:j], j
        if name in self.env:
            return self.env[name]
        assert self.peek() == "("
        self.i += 1
        arg = self.expr()
        assert self.s[self.i] == ")"
        self.i += 1
        if name == "log" and arg <= 0 or name == "sqrt" and arg < 0:
            raise ArithmeticError(name)
        try:
            return self.FUNCS[name](arg)
        except (OverflowError, ValueError):
            raise ArithmeticError(name)


def interpret(src, x, u, v):
    return DirectInterpreter(src, x, u, v).run()


def dense_solve(A, b):
    """Gaussian elimination with partial pivoting on a dense copy."""
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    n = len(b)
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if p != k:
            A[[k, p]] = A[[p, k]]
            b[[k, p]] = b[[p, k]]
        for i in range(k + 1, n):
            m = A[i, k] / A[k, k]
            A[i, k:] -= m * A[k, k:]
            b[i] -= m * b[k]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - A[i, i + 1:] @ x[i + 1:]) / A[i, i]
    return x


def dirichlet_green_solve(load, left, right):
    """Solve s_{i-1} - 2 s_i + s_{i+1} = load_i (interior), s_0 = left, s_{N-1} = right.

    Closed form: the linear ramp between the boundary values plus the
    discrete Green's function of the second difference,
    ``G[i, j] = -i (n+1-j) / (n+1)`` for ``i <= j`` (interior 1-based).
    """
    load = np.asarray(load, dtype=float)
    n = len(load)  # interior points
    N = n + 2
    idx = np.arange(N)
    s = left + (right - left) * idx / (N - 1)
    i = np.arange(1, n + 1)[:, None]
    j = np.arange(1, n + 1)[None, :]
    G = -np.where(i <= j, i * (n + 1 - j), j * (n + 1 - i)) / (n + 1)
    s[1:-1] += G @ load
    return s


def bisect(F, lo, hi, iters=200):
    flo = F(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = F(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
