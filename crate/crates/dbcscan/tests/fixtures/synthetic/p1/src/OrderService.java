package com.fixture.p1;

import com.google.common.base.Preconditions;

public class OrderService {

  public void submitOrder(Object request, boolean ready) {
    Preconditions.checkNotNull(request, "order request");
    Preconditions.checkArgument(ready);
    Preconditions.recordMetric(request);
  }
}
