import { render } from "./render.js";

export function formatLabel(name, count) {
  if (!name) {
    return "";
  }
  return count > 1 ? `${name} (${count})` : name;
}

const sumPositive = (values) => {
  let total = 0;
  for (const v of values) {
    if (v > 0 && Number.isFinite(v)) {
      total += v;
    }
  }
  return total;
};

class Widget {
  constructor(id, options) {
    this.id = id;
    this.options = options || {};
  }

  draw(ctx) {
    while (ctx.busy) {
      ctx.wait();
    }
    try {
      render(ctx, this.id);
    } catch (err) {
      console.error(err);
    }
  }
}

function pick(kind) {
  switch (kind) {
    case "a":
      return 1;
    case "b":
      return 2;
    default:
      return 0;
  }
}
