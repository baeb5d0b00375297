class InvalidScale(ValueError):
    pass


class InvalidRun(ValueError):
    pass


class KindMismatch(TypeError):
    """An ordering was applied to runs of the wrong retrieval mode."""


class NotDistributive(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"space has {required} elements, budget is {budget} (raise --budget)")
