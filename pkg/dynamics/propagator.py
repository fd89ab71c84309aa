from tqdm import trange
import wandb

from potential.params import PhysParams


class StepSizeError(ValueError):
    """ Raised when a time step is too large for the propagator """


class Propagator:
    """Base class for all time propagators.

    Subclasses implement step() and observe(); evolve() drives the loop, records the
    observables and optionally sends them to wandb.
    """

    def __init__(self, dt, params=PhysParams(), logging=False, *args, **kwargs):
        if not dt > 0:
            raise StepSizeError(f"Invalid dt: {dt}")
        self.dt = dt
        self.params = params
        self.logging = logging
        self.times = []
        self.states = []
        self.observables = []

    def step(self, state, t):
        """Advance the state from t to t + dt
        """
        raise NotImplementedError

    def observe(self, state, t):
        """Observables recorded along the trajectory, as a dict of floats
        """
        return {}

    def record(self, state, t):
        self.times.append(t)
        self.states.append(state)
        self.observables.append(self.observe(state, t))
        if self.logging:
            self.log()

    def log(self):
        """Log the latest observables for monitoring
        """
        wandb.log({"t": self.times[-1], **self.observables[-1]})

    def evolve(self, initial, steps, record_every=1, verbose=False):
        """Propagate the initial state over steps time steps

        Args:
            initial: State at t = 0
            steps (int): Number of time steps
            record_every (int): Record every record_every steps (the last step is always recorded)
            verbose (bool): Show a progress bar

        Returns:
            The state at t = steps * dt
        """
        if steps < 1:
            raise ValueError(f"Invalid step count: {steps}")
        if record_every < 1:
            raise ValueError(f"Invalid record interval: {record_every}")
        self.times, self.states, self.observables = [], [], []
        state = initial
        self.record(state, 0.0)
        pbar = trange(steps, desc='Initialization') if verbose else range(steps)
        for i in pbar:
            state = self.step(state, i * self.dt)
            if (i + 1) % record_every == 0 or i + 1 == steps:
                self.record(state, (i + 1) * self.dt)
                if verbose:
                    pbar.set_description(f"Step {i+1}/{steps}")
                    if self.observables:
                        pbar.set_postfix(**{key: f"{value:.4f}" for key, value in self.observables[-1].items()})
        return state
